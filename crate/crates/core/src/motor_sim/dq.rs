//! Rotation between the stationary coil frame (a, b) and the rotor frame (d, q).
//!
//! The electrical angle is `N * y`; the map is a plane rotation, so it is
//! orthogonal and preserves `a² + b²`.

/// Coil currents (or voltages) to rotor frame: `[d, q] = Ψ(y) [a, b]`.
#[inline]
pub fn dq_transform(y: f64, a: f64, b: f64, rotor_teeth: u32) -> (f64, f64) {
    let (s, c) = (f64::from(rotor_teeth) * y).sin_cos();
    (c * a + s * b, -s * a + c * b)
}

/// Rotor frame back to coil frame: `[a, b] = Ψ(y)⁻¹ [d, q]`.
#[inline]
pub fn inverse_dq_transform(y: f64, d: f64, q: f64, rotor_teeth: u32) -> (f64, f64) {
    let (s, c) = (f64::from(rotor_teeth) * y).sin_cos();
    (c * d - s * q, s * d + c * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_at_zero_angle() {
        assert_eq!(dq_transform(0.0, 1.0, 2.0, 50), (1.0, 2.0));
        assert_eq!(inverse_dq_transform(0.0, 3.0, 4.0, 50), (3.0, 4.0));
    }

    #[test]
    fn quarter_turn_electrical() {
        // N y = π/2
        let (d, q) = dq_transform(PI / 2.0, 1.0, 2.0, 1);
        assert!((d - 2.0).abs() < 1e-15);
        assert!((q + 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_turn_inverse() {
        let (a, b) = inverse_dq_transform(PI, 1.0, 0.0, 1);
        assert!((a + 1.0).abs() < 1e-15);
        assert!(b.abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn norm_preserved(y in -100.0..100.0f64, a in -10.0..10.0f64, b in -10.0..10.0f64) {
            let (d, q) = dq_transform(y, a, b, 50);
            prop_assert!(((d * d + q * q) - (a * a + b * b)).abs() < 1e-12);
        }

        #[test]
        fn roundtrip(y in -100.0..100.0f64, d in -10.0..10.0f64, q in -10.0..10.0f64) {
            let (a, b) = inverse_dq_transform(y, d, q, 50);
            let (d2, q2) = dq_transform(y, a, b, 50);
            prop_assert!((d2 - d).abs() < 1e-12 && (q2 - q).abs() < 1e-12);
        }

        #[test]
        fn rotation_is_orthogonal(y in -100.0..100.0f64) {
            // columns of Ψ(y) are the images of the unit vectors
            let c0 = dq_transform(y, 1.0, 0.0, 50);
            let c1 = dq_transform(y, 0.0, 1.0, 50);
            prop_assert!((c0.0 * c0.0 + c0.1 * c0.1 - 1.0).abs() < 1e-12);
            prop_assert!((c1.0 * c1.0 + c1.1 * c1.1 - 1.0).abs() < 1e-12);
            prop_assert!((c0.0 * c1.0 + c0.1 * c1.1).abs() < 1e-12);
        }
    }
}
