//! 2x2 scattering matrices for electronic beam splitters.
//!
//! A splitter relates the creation operators of its two input leads to
//! those of its two output leads through
//!
//! ```text
//! S = | r   t' |
//!     | t   r' |
//! ```
//!
//! Column `j` of `S` holds the output amplitudes of an electron entering
//! through input `j`.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Complex probability amplitude.
pub type ComplexAmplitude = Complex64;

/// Unitarity tolerance used throughout the crate.
pub const UNITARY_TOL: f64 = 1e-12;

/// Map an angle onto `(-pi, pi]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let mut reduced = libm::fmod(angle, TAU);
    if reduced <= -PI {
        reduced += TAU;
    } else if reduced > PI {
        reduced -= TAU;
    }
    reduced
}

/// Physical parameters of a lossless beam splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    reflectance: f64,
    phase_r: f64,
    phase_t: f64,
    phase_global: f64,
}

impl BeamSplitterSpec {
    pub fn new(reflectance: f64, phase_r: f64, phase_t: f64, phase_global: f64) -> Result<Self> {
        ensure_finite(reflectance, "reflectance")?;
        if !(0.0..=1.0).contains(&reflectance) {
            return Err(Error::ReflectanceOutOfRange(reflectance));
        }
        ensure_finite(phase_r, "phase_r")?;
        ensure_finite(phase_t, "phase_t")?;
        ensure_finite(phase_global, "phase_global")?;
        Ok(Self {
            reflectance,
            phase_r,
            phase_t,
            phase_global,
        })
    }

    /// 50/50 splitter with all phases zero.
    pub const fn symmetric() -> Self {
        Self {
            reflectance: 0.5,
            phase_r: 0.0,
            phase_t: 0.0,
            phase_global: 0.0,
        }
    }

    /// Fully reflecting splitter; builds the identity matrix.
    pub const fn reflecting() -> Self {
        Self {
            reflectance: 1.0,
            phase_r: 0.0,
            phase_t: 0.0,
            phase_global: 0.0,
        }
    }

    pub fn reflectance(&self) -> f64 {
        self.reflectance
    }

    pub fn transmittance(&self) -> f64 {
        1.0 - self.reflectance
    }

    pub fn phase_r(&self) -> f64 {
        self.phase_r
    }

    pub fn phase_t(&self) -> f64 {
        self.phase_t
    }

    pub fn phase_global(&self) -> f64 {
        self.phase_global
    }

    pub fn with_reflectance(self, reflectance: f64) -> Result<Self> {
        Self::new(reflectance, self.phase_r, self.phase_t, self.phase_global)
    }

    pub fn with_phase_t(self, phase_t: f64) -> Result<Self> {
        Self::new(self.reflectance, self.phase_r, phase_t, self.phase_global)
    }

    pub fn with_phase_r(self, phase_r: f64) -> Result<Self> {
        Self::new(self.reflectance, phase_r, self.phase_t, self.phase_global)
    }
}

/// A 2x2 complex matrix in scattering-matrix layout.
///
/// The constructor only enforces finite entries; use [`check_unitary`] or
/// [`Unitary2::unitary`] when unitarity must be guaranteed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    r: Complex64,
    t_prime: Complex64,
    t: Complex64,
    r_prime: Complex64,
}

impl Unitary2 {
    /// Build from rows `(r, t')` and `(t, r')`.
    pub fn new(r: Complex64, t_prime: Complex64, t: Complex64, r_prime: Complex64) -> Result<Self> {
        for (z, name) in [(r, "r"), (t_prime, "t'"), (t, "t"), (r_prime, "r'")] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(Self {
            r,
            t_prime,
            t,
            r_prime,
        })
    }

    /// Like [`Unitary2::new`] but rejects matrices that are not unitary to
    /// within [`UNITARY_TOL`].
    pub fn unitary(
        r: Complex64,
        t_prime: Complex64,
        t: Complex64,
        r_prime: Complex64,
    ) -> Result<Self> {
        let m = Self::new(r, t_prime, t, r_prime)?;
        let dev = m.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { max_deviation: dev });
        }
        Ok(m)
    }

    pub const fn identity() -> Self {
        Self {
            r: Complex64::new(1.0, 0.0),
            t_prime: Complex64::new(0.0, 0.0),
            t: Complex64::new(0.0, 0.0),
            r_prime: Complex64::new(1.0, 0.0),
        }
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn t_prime(&self) -> Complex64 {
        self.t_prime
    }

    pub fn r_prime(&self) -> Complex64 {
        self.r_prime
    }

    /// `|r|^2`.
    pub fn reflectance(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `|t|^2`.
    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// Matrix element at `(row, col)`; indices are 0 or 1.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match (row, col) {
            (0, 0) => self.r,
            (0, 1) => self.t_prime,
            (1, 0) => self.t,
            (1, 1) => self.r_prime,
            _ => panic!("Unitary2 index ({row}, {col}) out of bounds"),
        }
    }

    /// Output amplitudes for an electron entering through input `col`.
    pub fn column(&self, col: usize) -> [Complex64; 2] {
        [self.entry(0, col), self.entry(1, col)]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.r * v[0] + self.t_prime * v[1],
            self.t * v[0] + self.r_prime * v[1],
        ]
    }

    /// Multiply every entry by `e^{i gamma}`.
    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let g = Complex64::cis(gamma);
        Self {
            r: self.r * g,
            t_prime: self.t_prime * g,
            t: self.t * g,
            r_prime: self.r_prime * g,
        }
    }

    /// Largest elementwise modulus of `U U^dag - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let rows = [[self.r, self.t_prime], [self.t, self.r_prime]];
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc: Complex64 = rows[i]
                    .iter()
                    .zip(&rows[j])
                    .map(|(a, b)| a * b.conj())
                    .sum();
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Canonical completion of a splitter:
///
/// ```text
/// U = e^{i g} | cos(th) e^{i pr}   -sin(th) e^{-i pt} |
///             | sin(th) e^{i pt}    cos(th) e^{-i pr} |
/// ```
///
/// with `cos(th) = sqrt(R)` and `sin(th) = sqrt(1 - R)`.
pub fn build_beam_splitter(spec: &BeamSplitterSpec) -> Unitary2 {
    let cos = libm::sqrt(spec.reflectance);
    let sin = libm::sqrt(spec.transmittance());
    let g = spec.phase_global;
    Unitary2 {
        r: Complex64::from_polar(cos, g + spec.phase_r),
        t_prime: -Complex64::from_polar(sin, g - spec.phase_t),
        t: Complex64::from_polar(sin, g + spec.phase_t),
        r_prime: Complex64::from_polar(cos, g - spec.phase_r),
    }
}

/// True iff every element of `U U^dag - I` has modulus at most `tol`.
pub fn check_unitary(u: &Unitary2, tol: f64) -> bool {
    debug_assert!(tol > 0.0, "check_unitary needs a positive tolerance");
    u.unitarity_deviation() <= tol
}

/// Phase enclosed by an interferometer loop built from `s_in` followed by
/// `s_out`: `arg(t_in) + arg(t'_out) - arg(r_in) - arg(r_out)`, in `(-pi, pi]`.
pub fn loop_phase(s_in: &Unitary2, s_out: &Unitary2) -> Result<f64> {
    let factors = [s_in.t, s_out.t_prime, s_in.r, s_out.r];
    if factors.iter().any(|z| z.norm() < f64::MIN_POSITIVE) {
        return Err(Error::UndefinedPhase);
    }
    // Phase of the product instead of a sum of four args keeps the result
    // reduced without accumulating branch cuts.
    let combined = s_in.t * s_out.t_prime * s_in.r.conj() * s_out.r.conj();
    Ok(normalize_angle(combined.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn fully_reflecting_is_identity() {
        let u = build_beam_splitter(&BeamSplitterSpec::reflecting());
        assert_eq!(u, Unitary2::identity());
    }

    #[test]
    fn symmetric_matches_canonical_form() {
        let u = build_beam_splitter(&BeamSplitterSpec::symmetric());
        let h = FRAC_1_SQRT_2;
        assert!(close(u.r(), Complex64::new(h, 0.0), 1e-15));
        assert!(close(u.t_prime(), Complex64::new(-h, 0.0), 1e-15));
        assert!(close(u.t(), Complex64::new(h, 0.0), 1e-15));
        assert!(close(u.r_prime(), Complex64::new(h, 0.0), 1e-15));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            BeamSplitterSpec::new(1.2, 0.0, 0.0, 0.0),
            Err(Error::ReflectanceOutOfRange(1.2))
        );
        assert!(BeamSplitterSpec::new(-0.1, 0.0, 0.0, 0.0).is_err());
        assert_eq!(
            BeamSplitterSpec::new(0.5, f64::NAN, 0.0, 0.0),
            Err(Error::NonFinite("phase_r"))
        );
        assert!(BeamSplitterSpec::new(0.5, 0.0, f64::INFINITY, 0.0).is_err());
        assert!(BeamSplitterSpec::new(0.5, 0.0, 0.0, f64::NEG_INFINITY).is_err());
        assert!(BeamSplitterSpec::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn check_unitary_examples() {
        assert!(check_unitary(&Unitary2::identity(), 1e-12));
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let skewed = Unitary2::new(one, zero, zero, Complex64::new(2.0, 0.0)).unwrap();
        assert!(!check_unitary(&skewed, 1e-12));
        assert!(matches!(
            Unitary2::unitary(one, zero, zero, Complex64::new(2.0, 0.0)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let one = Complex64::new(1.0, 0.0);
        let bad = Complex64::new(f64::NAN, 0.0);
        assert_eq!(
            Unitary2::new(one, bad, one, one),
            Err(Error::NonFinite("t'"))
        );
    }

    #[test]
    fn symmetric_loop_phase_is_pi() {
        let u = build_beam_splitter(&BeamSplitterSpec::symmetric());
        let phi = loop_phase(&u, &u).unwrap();
        assert!((phi - PI).abs() < 1e-15);
    }

    #[test]
    fn degenerate_loop_phase() {
        let u = build_beam_splitter(&BeamSplitterSpec::symmetric());
        let id = Unitary2::identity();
        assert_eq!(loop_phase(&id, &u), Err(Error::UndefinedPhase));
        assert_eq!(loop_phase(&u, &id), Err(Error::UndefinedPhase));
        let full_t = build_beam_splitter(&BeamSplitterSpec::new(0.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(loop_phase(&full_t, &u), Err(Error::UndefinedPhase));
    }

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((normalize_angle(TAU + 0.25) - 0.25).abs() < 1e-15);
    }

    fn angle_diff(a: f64, b: f64) -> f64 {
        normalize_angle(a - b).abs()
    }

    fn spec_strategy() -> impl Strategy<Value = BeamSplitterSpec> {
        (0.0..=1.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
            .prop_map(|(r, a, b, c)| BeamSplitterSpec::new(r, a, b, c).unwrap())
    }

    fn interior_spec() -> impl Strategy<Value = BeamSplitterSpec> {
        (
            0.01..0.99f64,
            -10.0..10.0f64,
            -10.0..10.0f64,
            -10.0..10.0f64,
        )
            .prop_map(|(r, a, b, c)| BeamSplitterSpec::new(r, a, b, c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn built_splitters_are_unitary(spec in spec_strategy()) {
            let u = build_beam_splitter(&spec);
            prop_assert!(check_unitary(&u, 1e-12));
            prop_assert!((u.reflectance() - spec.reflectance()).abs() <= 1e-12);
            prop_assert!((u.transmittance() - spec.transmittance()).abs() <= 1e-12);
            prop_assert!((u.reflectance() + u.transmittance() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn loop_phase_shifts_with_transmission_phase(
            a in interior_spec(), b in interior_spec(), shift in -3.0..3.0f64
        ) {
            let s_in = build_beam_splitter(&a);
            let s_out = build_beam_splitter(&b);
            let base = loop_phase(&s_in, &s_out).unwrap();
            let shifted_in = build_beam_splitter(&a.with_phase_t(a.phase_t() + shift).unwrap());
            let moved = loop_phase(&shifted_in, &s_out).unwrap();
            prop_assert!(angle_diff(moved, base + shift) < 1e-12);
        }

        #[test]
        fn loop_phase_ignores_global_phase(
            a in interior_spec(), b in interior_spec(), gamma in -10.0..10.0f64
        ) {
            let s_in = build_beam_splitter(&a);
            let s_out = build_beam_splitter(&b);
            let base = loop_phase(&s_in, &s_out).unwrap();
            let g_in = loop_phase(&s_in.with_global_phase(gamma), &s_out).unwrap();
            let g_out = loop_phase(&s_in, &s_out.with_global_phase(gamma)).unwrap();
            prop_assert!(angle_diff(g_in, base) < 1e-12);
            prop_assert!(angle_diff(g_out, base) < 1e-12);
        }
    }
}
