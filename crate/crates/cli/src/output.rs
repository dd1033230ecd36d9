use serde::Serialize;

/// Output encoding for tabular commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `printf("%.9g")`: nine significant digits, trailing zeros dropped,
/// exponent form outside `[1e-5, 1e9)`.
pub fn sig9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One sample of a transmission scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub energy: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    /// Absent for multi-segment profiles, where μ is not defined.
    pub mu2: Option<f64>,
}

pub fn render_scan(rows: &[ScanRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("energy,T2,R2,mu2\n");
            for row in rows {
                let mu2 = row.mu2.map(sig9).unwrap_or_default();
                out.push_str(&format!("{},{},{},{}\n", sig9(row.energy), sig9(row.t2), sig9(row.r2), mu2));
            }
            out
        }
        Format::Json => render_json(rows),
    }
}

pub fn render_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Plain CSV from a header and pre-formatted fields.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
