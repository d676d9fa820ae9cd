//! Spatial synthesis `w(x, t) = Σ_v e^{2πi v·x} Θ_v(t)` over finitely many modes.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::LabError;
use crate::scalar::{rational_to_real, Real};
use crate::spectral::trajectory::ModeTrajectory;

/// Surrogate growth bound `|Θ_v(t)| ≤ C·(1 + ‖n‖₂)^k` on the sampled times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound<T> {
    pub constant: T,
    pub exponent: u32,
}

impl<T: Real> GrowthBound<T> {
    pub fn at(&self, n_vec: &[i64]) -> T {
        let norm = n_vec
            .iter()
            .map(|&n| T::from_f64_lossy(n as f64).powi(2))
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        self.constant * (T::one() + norm).powi(self.exponent as i32)
    }
}

impl<T: Real> Default for GrowthBound<T> {
    fn default() -> Self {
        GrowthBound {
            constant: T::from_f64_lossy(1e6),
            exponent: 4,
        }
    }
}

/// Field samples on the product grid `t_grid × x_grid`, `t` outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField<T: Real> {
    pub t_grid: Vec<T>,
    pub x_grid: Vec<Vec<T>>,
    pub components: usize,
    /// `values[ti * x_grid.len() + xi][component]`.
    pub values: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SpatialField<T> {
    pub fn at(&self, ti: usize, xi: usize) -> &[Complex<T>] {
        &self.values[ti * self.x_grid.len() + xi]
    }

    /// CSV with columns `t, x1..xd, Re w1..Re wn, Im w1..Im wn`.
    pub fn to_csv(&self) -> String {
        let d = self.x_grid.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for k in 1..=d {
            out.push_str(&format!(",x{k}"));
        }
        for k in 1..=self.components {
            out.push_str(&format!(",re_w{k}"));
        }
        for k in 1..=self.components {
            out.push_str(&format!(",im_w{k}"));
        }
        out.push('\n');
        for (ti, t) in self.t_grid.iter().enumerate() {
            for (xi, x) in self.x_grid.iter().enumerate() {
                out.push_str(&t.to_string());
                for c in x {
                    out.push_str(&format!(",{c}"));
                }
                let w = self.at(ti, xi);
                for z in w {
                    out.push_str(&format!(",{}", z.re));
                }
                for z in w {
                    out.push_str(&format!(",{}", z.im));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy)]
struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Compensated<T> {
    fn new() -> Self {
        Compensated {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.carry
    }
}

pub fn synthesize_spatial_field<T: Real>(
    modes: &[ModeTrajectory<T>],
    x_grid: &[Vec<T>],
    t_grid: &[T],
    bound: &GrowthBound<T>,
) -> Result<SpatialField<T>, LabError> {
    let components = modes.first().map_or(0, |m| m.signal.dim());
    let dim = modes.first().map_or(0, |m| m.v.len());
    for m in modes {
        if m.signal.dim() != components {
            return Err(LabError::SignalDimension {
                expected: components,
                found: m.signal.dim(),
            });
        }
        if m.v.len() != dim {
            return Err(LabError::SignalDimension {
                expected: dim,
                found: m.v.len(),
            });
        }
    }
    if let Some(x) = x_grid.iter().find(|x| x.len() != dim) {
        return Err(LabError::SignalDimension {
            expected: dim,
            found: x.len(),
        });
    }

    // Θ_v(t) for every mode and time, checked against the growth bound
    let samples: Vec<Vec<Vec<Complex<T>>>> = modes.par_iter().map(|m| m.signal.sample(t_grid)).collect();
    for (m, s) in modes.iter().zip(&samples) {
        let limit = bound.at(&m.n_vec);
        let peak = s
            .iter()
            .flat_map(|w| w.iter().map(|z| z.norm()))
            .fold(T::zero(), T::max);
        if !(peak <= limit) {
            return Err(LabError::GrowthBound {
                n_vec: m.n_vec.clone(),
                value: peak.to_f64().unwrap_or(f64::NAN),
                bound: limit.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    // e^{2πi v·x}, reducing v·x modulo 1 before scaling by 2π
    let freqs: Vec<Vec<T>> = modes
        .iter()
        .map(|m| m.v.iter().map(rational_to_real).collect())
        .collect();
    let two_pi = T::PI() + T::PI();
    let phases: Vec<Vec<Complex<T>>> = x_grid
        .par_iter()
        .map(|x| {
            freqs
                .iter()
                .map(|v| {
                    let dot = v.iter().zip(x).fold(T::zero(), |a, (vk, xk)| a + *vk * *xk);
                    let frac = dot - dot.floor();
                    Complex::from_polar(T::one(), two_pi * frac)
                })
                .collect()
        })
        .collect();

    let values = (0..t_grid.len() * x_grid.len())
        .into_par_iter()
        .map(|idx| {
            let (ti, xi) = (idx / x_grid.len(), idx % x_grid.len());
            (0..components)
                .map(|c| {
                    let mut re = Compensated::new();
                    let mut im = Compensated::new();
                    for (k, s) in samples.iter().enumerate() {
                        let z = phases[xi][k] * s[ti][c];
                        re.add(z.re);
                        im.add(z.im);
                    }
                    Complex::new(re.value(), im.value())
                })
                .collect()
        })
        .collect();

    Ok(SpatialField {
        t_grid: t_grid.to_vec(),
        x_grid: x_grid.to_vec(),
        components,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::spectral::signal::ExpPolySignal;
    use num_traits::Zero;

    type C = Complex<f64>;

    fn mode(n: i64, amp: C, rate: C) -> ModeTrajectory<f64> {
        ModeTrajectory::from_signal(
            vec![n],
            vec![rational(n, 1)],
            ExpPolySignal::exponential(rate, vec![amp]),
        )
    }

    #[test]
    fn constant_mode_gives_constant_field() {
        let modes = vec![mode(0, C::new(1.0, 0.0), C::zero())];
        let xs: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 * 0.3]).collect();
        let f = synthesize_spatial_field(&modes, &xs, &[0.0, 1.0], &GrowthBound::default()).unwrap();
        for v in &f.values {
            assert!((v[0] - C::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn conjugate_modes_give_a_real_periodic_field() {
        let a = C::new(0.3, 0.8);
        let r = C::new(-0.2, 1.5);
        let modes = vec![mode(2, a, r), mode(-2, a.conj(), r.conj())];
        let xs: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64 * 0.17]).collect();
        let shifted: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0] + 1.0]).collect();
        let ts = [0.0, 0.4, 1.3];
        let f = synthesize_spatial_field(&modes, &xs, &ts, &GrowthBound::default()).unwrap();
        let g = synthesize_spatial_field(&modes, &shifted, &ts, &GrowthBound::default()).unwrap();
        for (u, w) in f.values.iter().zip(&g.values) {
            assert!(u[0].im.abs() < 1e-9);
            assert!((u[0] - w[0]).norm() <= 1e-9 * u[0].norm().max(1e-300));
        }
        let csv = f.to_csv();
        assert!(csv.starts_with("t,x1,re_w1,im_w1\n"));
        assert_eq!(csv.lines().count(), 1 + 7 * 3);
    }

    #[test]
    fn growth_violation_names_the_mode() {
        let modes = vec![
            mode(0, C::new(1.0, 0.0), C::zero()),
            mode(3, C::new(1e9, 0.0), C::zero()),
        ];
        let e = synthesize_spatial_field(&modes, &[vec![0.0]], &[0.0], &GrowthBound::default()).unwrap_err();
        assert!(matches!(e, LabError::GrowthBound { ref n_vec, .. } if n_vec == &vec![3]));
    }
}
