//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol * |I|)` or the subdivision budget runs out.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kronrod abscissae on [-1, 1], non-negative half, descending.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod abscissae (XGK[1], [3], [5], [7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum number of subintervals.
    pub max_subdivisions: usize,
}

impl<T: Scalar> Default for QuadratureSettings<T> {
    /// `rel_tol = 1e-8` (loosened to `50 eps` for `f32`), `abs_tol = 1e-12`,
    /// 200 subdivisions.
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-8).max(T::lit(50.0) * T::epsilon()),
            abs_tol: T::lit(1e-12),
            max_subdivisions: 200,
        }
    }
}

impl<T: Scalar> QuadratureSettings<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::InvalidQuadratureSettings("rel_tol must be positive"));
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(Error::InvalidQuadratureSettings(
                "abs_tol must be non-negative",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadratureSettings(
                "max_subdivisions must be at least 1",
            ));
        }
        Ok(())
    }

    #[inline]
    fn tolerance(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);

    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half_len * T::lit(x);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(w) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half_len,
        error: ((kronrod - gauss) * half_len).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(f: F, a: T, b: T, settings: &QuadratureSettings<T>) -> Result<Integral<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    settings.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("integration bounds must be finite"));
    }
    if a == b {
        return Ok(Integral {
            value: T::zero(),
            abs_error: T::zero(),
            subdivisions: 1,
        });
    }

    let mut segments = vec![gauss_kronrod(&f, a, b)];
    loop {
        let value = segments.iter().fold(T::zero(), |s, g| s + g.value);
        let error = segments.iter().fold(T::zero(), |s, g| s + g.error);
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailure {
                subdivisions: segments.len(),
                error: error.as_f64(),
                value: value.as_f64(),
            });
        }
        if error <= settings.tolerance(value) {
            return Ok(Integral {
                value,
                abs_error: error,
                subdivisions: segments.len(),
            });
        }
        if segments.len() >= settings.max_subdivisions {
            return Err(Error::QuadratureFailure {
                subdivisions: segments.len(),
                error: error.as_f64(),
                value: value.as_f64(),
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).expect("finite errors"))
            .map(|(i, _)| i)
            .expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval can no longer be split in this precision.
            return Err(Error::QuadratureFailure {
                subdivisions: segments.len() + 1,
                error: error.as_f64(),
                value: value.as_f64(),
            });
        }
        segments.push(gauss_kronrod(&f, seg.a, mid));
        segments.push(gauss_kronrod(&f, mid, seg.b));
    }
}

/// Integrates `f` over `[a, inf)` through `x = a + (t / (1 - t))^3`,
/// `t in [0, 1)`. The cubic map keeps algebraic tails decaying faster than
/// `x^-(1 + 1/3)` bounded in `t`.
pub fn integrate_to_infinity<T, F>(
    f: F,
    a: T,
    settings: &QuadratureSettings<T>,
) -> Result<Integral<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let one = T::one();
    let three = T::lit(3.0);
    integrate(
        |t: T| {
            let s = one - t;
            let r = t / s;
            let x = a + r * r * r;
            let jacobian = three * r * r / (s * s);
            let y = f(x) * jacobian;
            if y.is_finite() {
                y
            } else {
                T::zero()
            }
        },
        T::zero(),
        one,
        settings,
    )
}
