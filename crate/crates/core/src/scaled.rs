//! Complex numbers carried with a separate natural-log scale, for sums whose
//! individual terms overflow `f64` while the weighted result does not.

use num_complex::Complex64;

const RESCALE_ABOVE: f64 = 1e150;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(value: Complex64) -> Self {
        Scaled { mantissa: value, log_scale: 0.0 }
    }

    pub fn zero() -> Self {
        Scaled::new(Complex64::new(0.0, 0.0))
    }

    pub fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m > RESCALE_ABOVE || (m < 1.0 / RESCALE_ABOVE && m > 0.0) {
            let l = m.ln();
            Scaled { mantissa: self.mantissa / m, log_scale: self.log_scale + l }
        } else {
            self
        }
    }

    pub fn scale(self, factor: Complex64) -> Self {
        Scaled { mantissa: self.mantissa * factor, log_scale: self.log_scale }.normalized()
    }

    pub fn mul(self, other: Scaled) -> Self {
        Scaled { mantissa: self.mantissa * other.mantissa, log_scale: self.log_scale + other.log_scale }.normalized()
    }

    pub fn add(self, other: Scaled) -> Self {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return other;
        }
        if other.mantissa == Complex64::new(0.0, 0.0) {
            return self;
        }
        let (big, small) = if self.log_scale >= other.log_scale { (self, other) } else { (other, self) };
        let shift = small.log_scale - big.log_scale;
        Scaled { mantissa: big.mantissa + small.mantissa * shift.exp(), log_scale: big.log_scale }.normalized()
    }

    pub fn sub(self, other: Scaled) -> Self {
        self.add(Scaled { mantissa: -other.mantissa, log_scale: other.log_scale })
    }

    /// Value times `exp(extra_log)`; infinite when out of range.
    pub fn to_complex_with(self, extra_log: f64) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * (self.log_scale + extra_log).exp()
    }

    pub fn log_magnitude(self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

/// Neumaier-compensated sum of real terms.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Compensated sum applied separately to the real and imaginary parts.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_add_matches_plain_arithmetic() {
        let a = Scaled::new(Complex64::new(3.0, -1.0));
        let b = Scaled { mantissa: Complex64::new(0.5, 0.25), log_scale: 2.0f64.ln() };
        let s = a.add(b).to_complex_with(0.0);
        assert!((s - Complex64::new(4.0, -0.5)).norm() < 1e-14);
    }

    #[test]
    fn huge_products_survive_with_log_scale() {
        let mut x = Scaled::new(Complex64::new(1.0, 0.0));
        for _ in 0..400 {
            x = x.scale(Complex64::new(1e10, 0.0));
        }
        assert!((x.log_magnitude() - 4000.0 * 10f64.ln()).abs() < 1e-9);
        assert!((x.to_complex_with(-4000.0 * 10f64.ln()).re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        assert!((s.value() - (1.0 + 1e-16)).abs() < 1e-18);
    }
}
