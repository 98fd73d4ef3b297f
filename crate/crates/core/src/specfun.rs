//! Laguerre polynomials, log-space binomials and the f-factorial.

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::nlcs::NonlinearFunction;

/// `L_m(x) = Σ_{n=0}^m (−1)ⁿ C(m,n) xⁿ/n!` by the three-term recurrence
/// `(j+1)L_{j+1} = (2j+1−x)L_j − j·L_{j−1}`.
pub fn laguerre(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for j in 1..m {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 - x) * cur - j * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln C(a, b)`; exactly zero at `b = 0` and `b = a`.
pub fn log_binomial(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(Error::Domain(format!("binomial({a}, {b}) with b > a")));
    }
    if b == 0 || b == a {
        return Ok(0.0);
    }
    Ok(ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b))
}

/// `f(n)! = f(n)·f(n−1)···f(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FFactorial {
    pub value: Complex64,
    /// Set when one of the factors is exactly zero.
    pub is_exact_zero: bool,
}

/// `f(n)!` with `f(−1)! = 1`.
pub fn f_factorial(f: &NonlinearFunction, n: i64) -> Result<FFactorial> {
    if n < -1 {
        return Err(Error::Domain(format!("f-factorial at n = {n} < -1")));
    }
    if n >= f.len() as i64 {
        return Err(Error::Domain(format!(
            "f-factorial at n = {n} beyond tabulated length {}",
            f.len()
        )));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for &factor in &f.values()[..(n + 1) as usize] {
        if factor == Complex64::new(0.0, 0.0) {
            return Ok(FFactorial {
                value: Complex64::new(0.0, 0.0),
                is_exact_zero: true,
            });
        }
        value *= factor;
    }
    Ok(FFactorial {
        value,
        is_exact_zero: false,
    })
}
