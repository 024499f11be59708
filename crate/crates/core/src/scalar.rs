use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed};

/// Floating-point scalar the library is generic over: `f32` or `f64`.
///
/// The bound set is what the propagator, FFTs and special functions need;
/// `Signed + 'static` keeps the type acceptable to `rustfft`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Signed
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion from an `f64` literal.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal must convert into the scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Folds a quasi-energy into the first Brillouin zone `(-1/2, 1/2]`
/// (drive-frequency units).
pub(crate) fn fold_quasienergy<R: Real>(eps: R) -> R {
    let one = R::one();
    let half = R::of(0.5);
    let mut x = eps - eps.round();
    // round() leaves values in [-1/2, 1/2]; move -1/2 to the +1/2 edge.
    if x <= -half {
        x += one;
    }
    if x > half {
        x -= one;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::fold_quasienergy;

    #[test]
    fn folding_lands_in_zone() {
        for &(x, want) in &[
            (0.0, 0.0),
            (0.3, 0.3),
            (-0.3, -0.3),
            (0.5, 0.5),
            (-0.5, 0.5),
            (1.5, 0.5),
            (-1.5, 0.5),
            (0.85, -0.15),
            (-0.85, 0.15),
            (2.3, 0.3),
            (-17.25, -0.25),
        ] {
            let got = fold_quasienergy::<f64>(x);
            assert!(
                (got - want).abs() < 1e-12,
                "fold({x}) = {got}, expected {want}"
            );
            assert!(got > -0.5 && got <= 0.5);
        }
    }
}
