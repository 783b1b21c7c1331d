//! Command-line value parsers: dims, momenta, complex scalars and amplitudes.

use dkcalc::algebra::BLADES;
use dkcalc::lattice::AXES;
use dkcalc::{Complex64, LatticeDims, SiteVector};

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

fn parse_four(s: &str, what: &str) -> Result<[usize; AXES], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != AXES {
        return Err(format!(
            "{what} needs four comma-separated integers, got {s:?}"
        ));
    }
    let mut out = [0; AXES];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| format!("{what}: not a non-negative integer: {p:?}"))?;
    }
    Ok(out)
}

/// `"3,3,3,3"`
pub fn dims(s: &str) -> Result<LatticeDims, String> {
    LatticeDims::new(parse_four(s, "dims")?).map_err(|e| e.to_string())
}

/// `"1,0,0,0"`
pub fn momentum(s: &str) -> Result<[usize; AXES], String> {
    parse_four(s, "momentum")
}

/// `"re,im"` or a bare real number.
pub fn complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(Complex64::new(parse_f64(s)?, 0.0)),
    }
}

/// Sixteen `"re,im"` pairs separated by `;`, in blade order.
pub fn amplitude(s: &str) -> Result<SiteVector, String> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != BLADES {
        return Err(format!(
            "amplitude needs {BLADES} ';'-separated complex values, got {}",
            parts.len()
        ));
    }
    let mut out = SiteVector::zero();
    for (o, p) in out.0.iter_mut().zip(parts) {
        *o = complex(p)?;
    }
    Ok(out)
}
