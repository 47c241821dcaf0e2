use ddg_core::dca::Sectors;
use ddg_core::patterns::{hirota_backlund_octant, HirotaOctant};
use num_complex::Complex64;
use std::collections::BTreeMap;

fn main() {
    let s = Sectors::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], 0.0);
    let mut values = BTreeMap::new();
    for x in 0..=4i64 {
        for y in 0..=4i64 {
            values.insert(vec![x, y], Complex64::new(1.0, 0.0));
        }
    }
    let trivial = HirotaOctant { m: 0, size: 4, values };
    for ang in [0.9f64, 2.0, -0.9, 0.3] {
        let lambda = Complex64::from_polar(1.0, ang);
        let (plus, _) = hirota_backlund_octant(&s, &trivial, lambda, Complex64::new(1.0, 0.0)).unwrap();
        let mut line = format!("ang={ang}: odd-parity values:");
        for (p, v) in &plus.values {
            if (p[0] + p[1]) % 2 == 1 {
                line.push_str(&format!(" ({},{})={:.3}{:+.0e}i", p[0], p[1], v.re, v.im));
            }
        }
        println!("{}", &line[..line.len().min(700)]);
    }
}
