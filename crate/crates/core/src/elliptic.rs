//! Jacobi elliptic functions and theta functions for complex arguments.
//!
//! `sn`, `cn`, `dn` are computed through theta-function ratios with the
//! nome obtained from arithmetic-geometric means; a descending Landen
//! ladder provides an independent route for `sn` used by the tests.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn agm(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..64 {
        let (an, bn) = ((a + b) * 0.5, (a * b).sqrt());
        // keep the sqrt branch closest to the running mean
        let bn = if (an - bn).norm() <= (an + bn).norm() { bn } else { -bn };
        if (an - bn).norm() < 1e-16 * an.norm().max(1.0) {
            return an;
        }
        a = an;
        b = bn;
    }
    (a + b) * 0.5
}

/// Complete elliptic integral K(k), complex modulus.
pub fn elliptic_k(k: Complex64) -> Complex64 {
    let kp = (ONE - k * k).sqrt();
    Complex64::new(core::f64::consts::PI / 2.0, 0.0) / agm(ONE, kp)
}

/// Elliptic data attached to a fixed modulus.
#[derive(Debug, Clone, Copy)]
pub struct JacobiModulus {
    pub k: Complex64,
    pub big_k: Complex64,
    pub big_k_prime: Complex64,
    pub nome: Complex64,
}

impl JacobiModulus {
    pub fn new(k: Complex64) -> Self {
        let big_k = elliptic_k(k);
        let kp = (ONE - k * k).sqrt();
        let big_k_prime = elliptic_k(kp);
        let nome = (-Complex64::new(core::f64::consts::PI, 0.0) * big_k_prime / big_k).exp();
        JacobiModulus { k, big_k, big_k_prime, nome }
    }

    fn theta_z(&self, which: u8, z: Complex64) -> Complex64 {
        theta(which, z, self.nome)
    }

    /// sn, cn, dn at `u` from theta ratios.
    pub fn sn_cn_dn(&self, u: Complex64) -> (Complex64, Complex64, Complex64) {
        let z = Complex64::new(core::f64::consts::FRAC_PI_2, 0.0) * u / self.big_k;
        let t2 = theta(2, ZERO, self.nome);
        let t3 = theta(3, ZERO, self.nome);
        let t4 = theta(4, ZERO, self.nome);
        let t1z = self.theta_z(1, z);
        let t2z = self.theta_z(2, z);
        let t3z = self.theta_z(3, z);
        let t4z = self.theta_z(4, z);
        let sn = (t3 / t2) * (t1z / t4z);
        let cn = (t4 / t2) * (t2z / t4z);
        let dn = (t4 / t3) * (t3z / t4z);
        (sn, cn, dn)
    }

    pub fn sn(&self, u: Complex64) -> Complex64 {
        self.sn_cn_dn(u).0
    }

    /// Jacobi's Theta function: theta_4 evaluated at pi u / (2K).
    pub fn big_theta(&self, u: Complex64) -> Complex64 {
        let z = Complex64::new(core::f64::consts::FRAC_PI_2, 0.0) * u / self.big_k;
        self.theta_z(4, z)
    }
}

/// Jacobi theta functions theta_1..theta_4 (series in the nome `q`),
/// truncated when terms drop below 1e-16 of the running sum.
pub fn theta(which: u8, z: Complex64, q: Complex64) -> Complex64 {
    let mut sum = match which {
        1 | 2 => ZERO,
        _ => ONE,
    };
    for n in 0..64u32 {
        let term = match which {
            1 => {
                let e = (n as f64 + 0.5) * (n as f64 + 0.5);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                q.powf(e) * ((2 * n + 1) as f64 * z).sin() * 2.0 * sign
            }
            2 => {
                let e = (n as f64 + 0.5) * (n as f64 + 0.5);
                q.powf(e) * ((2 * n + 1) as f64 * z).cos() * 2.0
            }
            3 => {
                let m = n + 1;
                q.powu(m * m) * (2.0 * m as f64 * z).cos() * 2.0
            }
            _ => {
                let m = n + 1;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                q.powu(m * m) * (2.0 * m as f64 * z).cos() * 2.0 * sign
            }
        };
        sum += term;
        if n > 2 && term.norm() < 1e-16 * sum.norm().max(1e-30) {
            break;
        }
    }
    sum
}

/// Independent `sn` via the descending Landen transformation, accurate to
/// about 1e-13 for moderate arguments; test oracle for the theta route.
pub fn sn_landen(u: Complex64, k: Complex64) -> Complex64 {
    let mut ks = [ZERO; 24];
    let mut n = 0;
    let mut kc = k;
    while n < 24 {
        ks[n] = kc;
        if kc.norm() < 1e-14 {
            break;
        }
        let kp = (ONE - kc * kc).sqrt();
        kc = (ONE - kp) / (ONE + kp);
        n += 1;
    }
    // argument at the bottom of the ladder
    let mut v = u;
    for i in 1..=n {
        v /= ONE + ks[i.min(23)];
    }
    let mut s = v.sin();
    // ascend
    for i in (1..=n).rev() {
        let kl = ks[i.min(23)];
        s = (ONE + kl) * s / (ONE + kl * s * s);
    }
    s
}
