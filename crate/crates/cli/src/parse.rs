//! Parsers for CLI argument grammars: complex literals, right-hand-side
//! registry specs, tau lists, region ranges, and the t,value CSV format.

use fracal::prelude::*;
use num_complex::Complex64;

pub type ParseResult<T> = std::result::Result<T, String>;

/// Complex literal: `1.5`, `-2`, `1+2i`, `-1-0.5i`, `2i`, `i`, `-i`.
pub fn complex(s: &str) -> ParseResult<Complex64> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = t.strip_suffix('i') {
        // find the split between real and imaginary parts, skipping the
        // leading sign and exponent signs
        let chars: Vec<char> = body.chars().collect();
        let mut split = None;
        for k in (1..chars.len()).rev() {
            if (chars[k] == '+' || chars[k] == '-')
                && chars[k - 1] != 'e'
                && chars[k - 1] != 'E'
            {
                split = Some(k);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad imaginary part in {s:?}"))?,
        };
        let re = if re_s.is_empty() {
            0.0
        } else {
            re_s.parse::<f64>()
                .map_err(|_| format!("bad real part in {s:?}"))?
        };
        Ok(Complex64::new(re, im))
    } else {
        t.parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("bad number {s:?}"))
    }
}

/// Comma-separated complex literals.
pub fn complex_list(s: &str) -> ParseResult<Vec<Complex64>> {
    s.split(',').map(complex).collect()
}

/// A float literal, allowing the `2^-10` power form.
pub fn float(s: &str) -> ParseResult<f64> {
    let e = s.trim();
    if let Some(exp) = e.strip_prefix("2^") {
        exp.parse::<i32>()
            .map(|p| 2f64.powi(p))
            .map_err(|_| format!("bad power-of-two literal {e:?}"))
    } else {
        e.parse::<f64>().map_err(|_| format!("bad number {e:?}"))
    }
}

/// Comma-separated floats; entries may use the `2^-10` power form.
pub fn float_list(s: &str) -> ParseResult<Vec<f64>> {
    s.split(',').map(float).collect()
}

/// Semicolon-separated re,im eigenvalue pairs: `-1,0;0.5,2`.
pub fn eig_list(s: &str) -> ParseResult<Vec<Complex64>> {
    s.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            match parts.as_slice() {
                [re, im] => Ok(Complex64::new(
                    re.trim().parse().map_err(|_| format!("bad re in {pair:?}"))?,
                    im.trim().parse().map_err(|_| format!("bad im in {pair:?}"))?,
                )),
                _ => Err(format!("expected re,im in {pair:?}")),
            }
        })
        .collect()
}

/// Region axis spec `lo:hi:n`.
pub fn axis(s: &str) -> ParseResult<(f64, f64, usize)> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => Ok((
            lo.trim().parse().map_err(|_| format!("bad axis lo {lo:?}"))?,
            hi.trim().parse().map_err(|_| format!("bad axis hi {hi:?}"))?,
            n.trim().parse().map_err(|_| format!("bad axis count {n:?}"))?,
        )),
        _ => Err(format!("expected lo:hi:n, got {s:?}")),
    }
}

/// Region spec `re0:re1:n,im0:im1:m`.
pub fn region(s: &str) -> ParseResult<((f64, f64, usize), (f64, f64, usize))> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re, im] => Ok((axis(re)?, axis(im)?)),
        _ => Err(format!("expected re-axis,im-axis, got {s:?}")),
    }
}

fn kv_pairs(body: &str) -> ParseResult<Vec<(String, f64)>> {
    body.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {p:?}"))?;
            Ok((
                k.trim().to_string(),
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad value in {p:?}"))?,
            ))
        })
        .collect()
}

fn take(pairs: &[(String, f64)], key: &str) -> ParseResult<f64> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| format!("missing parameter {key}"))
}

/// A named right-hand side f(t, u) for the solver.
pub enum Rhs {
    /// `linear:lambda=-1` — f = λu (the analytic route requires this one).
    Linear { lambda: f64 },
    /// `logistic:r=1,K=2` — f = r·u·(1 - u/K).
    Logistic { r: f64, cap: f64 },
    /// `poly:c0,c1,c2,...` — f = Σ c_k u^k.
    Poly { coeffs: Vec<f64> },
    /// `mlnonlin:lambda=-1,p=2` — the sign-preserving power law
    /// f = λ·sign(u)|u|^p, a mildly nonlinear relaxation benchmark.
    PowerLaw { lambda: f64, p: f64 },
    /// `linsys:a11,a12;a21,a22` — f = A·u.
    LinSys { dim: usize, a: Vec<f64> },
}

impl Rhs {
    pub fn parse(s: &str) -> ParseResult<Rhs> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        match name {
            "linear" => {
                let pairs = kv_pairs(body)?;
                Ok(Rhs::Linear {
                    lambda: take(&pairs, "lambda")?,
                })
            }
            "logistic" => {
                let pairs = kv_pairs(body)?;
                Ok(Rhs::Logistic {
                    r: take(&pairs, "r")?,
                    cap: take(&pairs, "K")?,
                })
            }
            "poly" => {
                let coeffs = float_list(body)?;
                if coeffs.is_empty() {
                    return Err("poly needs at least one coefficient".into());
                }
                Ok(Rhs::Poly { coeffs })
            }
            "mlnonlin" => {
                let pairs = kv_pairs(body)?;
                Ok(Rhs::PowerLaw {
                    lambda: take(&pairs, "lambda")?,
                    p: take(&pairs, "p")?,
                })
            }
            "linsys" => {
                let rows: Vec<Vec<f64>> = body
                    .split(';')
                    .map(float_list)
                    .collect::<ParseResult<_>>()?;
                let dim = rows.len();
                if dim == 0 || rows.iter().any(|r| r.len() != dim) {
                    return Err("linsys needs a square matrix".into());
                }
                Ok(Rhs::LinSys {
                    dim,
                    a: rows.into_iter().flatten().collect(),
                })
            }
            other => Err(format!(
                "unknown rhs {other:?}; expected linear:, logistic:, poly: or linsys:"
            )),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Rhs::LinSys { dim, .. } => *dim,
            _ => 1,
        }
    }

    /// The evaluation closure for the solver.
    pub fn eval(&self) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
        move |_t, u, out| match self {
            Rhs::Linear { lambda } => out[0] = lambda * u[0],
            Rhs::Logistic { r, cap } => out[0] = r * u[0] * (1.0 - u[0] / cap),
            Rhs::Poly { coeffs } => {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * u[0] + c;
                }
                out[0] = acc;
            }
            Rhs::PowerLaw { lambda, p } => {
                out[0] = lambda * u[0].signum() * u[0].abs().powf(*p)
            }
            Rhs::LinSys { dim, a } => {
                for r in 0..*dim {
                    let mut acc = 0.0;
                    for c in 0..*dim {
                        acc += a[r * dim + c] * u[c];
                    }
                    out[r] = acc;
                }
            }
        }
    }
}

/// Forcing spec for analytic solves: `const:c` or `poly:c0,c1,...` (in t).
pub fn forcing(s: &str) -> ParseResult<Box<dyn Fn(f64) -> f64>> {
    let (name, body) = s.split_once(':').unwrap_or((s, ""));
    match name {
        "const" => {
            let c: f64 = body.parse().map_err(|_| format!("bad constant {body:?}"))?;
            Ok(Box::new(move |_| c))
        }
        "poly" => {
            let coeffs = float_list(body)?;
            Ok(Box::new(move |t| {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * t + c;
                }
                acc
            }))
        }
        other => Err(format!("unknown forcing {other:?}; expected const: or poly:")),
    }
}

/// Fall-time spec: `const:k`, `sqrt:c` (T = c√y) or `table:<csv>`.
pub enum FallTime {
    Const(f64),
    Sqrt(f64),
    Table(SampledFunction<f64>),
}

pub fn fall_time(s: &str) -> ParseResult<FallTime> {
    let (name, body) = s.split_once(':').unwrap_or((s, ""));
    match name {
        "const" => Ok(FallTime::Const(
            body.parse().map_err(|_| format!("bad constant {body:?}"))?,
        )),
        "sqrt" => Ok(FallTime::Sqrt(
            body.parse().map_err(|_| format!("bad coefficient {body:?}"))?,
        )),
        "table" => Ok(FallTime::Table(read_samples_csv(body)?)),
        other => Err(format!(
            "unknown fall-time {other:?}; expected const:, sqrt: or table:"
        )),
    }
}

/// Reads a `t,value` CSV (header row required, `#` comments allowed) and
/// checks the nodes sit on a uniform grid anchored at 0 within 1e-9
/// relative.
pub fn read_samples_csv(path: &str) -> ParseResult<SampledFunction<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| format!("{path} is empty"))?;
    let head_cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if head_cols.len() != 2 {
        return Err(format!("{path}: expected a t,value header, got {header:?}"));
    }
    if head_cols[0].parse::<f64>().is_ok() {
        return Err(format!("{path}: header row required (got numbers)"));
    }
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(format!("{path} line {}: expected 2 columns", i + 2));
        }
        ts.push(
            cells[0]
                .parse::<f64>()
                .map_err(|_| format!("{path} line {}: bad t", i + 2))?,
        );
        vs.push(
            cells[1]
                .parse::<f64>()
                .map_err(|_| format!("{path} line {}: bad value", i + 2))?,
        );
    }
    if ts.len() < 2 {
        return Err(format!("{path}: need at least 2 samples"));
    }
    let tau = ts[1] - ts[0];
    if !(tau > 0.0) {
        return Err(format!("{path}: nodes must be increasing"));
    }
    if ts[0].abs() > 1e-9 * tau {
        return Err(format!("{path}: grid must start at t = 0"));
    }
    for (k, t) in ts.iter().enumerate() {
        let want = k as f64 * tau;
        if (t - want).abs() > 1e-9 * want.max(tau) {
            return Err(format!(
                "{path}: node {k} at t = {t} is off the uniform grid (expected {want})"
            ));
        }
    }
    let grid = UniformGrid::new(tau, ts.len() - 1).map_err(|e| e.to_string())?;
    SampledFunction::new(grid, vs).map_err(|e| e.to_string())
}

/// Reads a headerless numeric CSV as a square matrix (d <= 8).
pub fn read_matrix_csv(path: &str) -> ParseResult<fracal::stability::SquareMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            line.split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad entry {c:?}")))
                .collect()
        })
        .collect::<ParseResult<_>>()?;
    fracal::stability::SquareMatrix::from_rows(&rows).map_err(|e| e.to_string())
}
