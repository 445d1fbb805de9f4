use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{CurveError, PuiseuxBranch, TruncatedSeries};

/// Which half of the first coordinate a star set parametrizes.
///
/// Plus segments sit at angles `2πl/k` and cover the branches over
/// `Re(x₁) ≥ 0`. Minus segments are the same construction rotated by `π` in
/// the first coordinate, which puts them at angles `(2l+1)π/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Union of radial segments `[0, ε·e^{iθ_j}]` in the parameter disk.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSet {
    k: u32,
    side: Side,
    angle_indices: Vec<u32>,
    scale: f64,
}

impl StarSet {
    pub fn new(k: u32, side: Side, angle_indices: Vec<u32>, scale: f64) -> Result<Self, CurveError> {
        if k == 0 {
            return Err(CurveError::InvalidStarSet("k must be positive".into()));
        }
        if angle_indices.is_empty() || angle_indices.len() > k as usize {
            return Err(CurveError::InvalidStarSet(format!(
                "need between 1 and k = {k} segments, got {}",
                angle_indices.len()
            )));
        }
        if angle_indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CurveError::InvalidStarSet(
                "angle indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = angle_indices.last() {
            if last >= k {
                return Err(CurveError::InvalidStarSet(format!(
                    "angle index {last} out of range 0..{k}"
                )));
            }
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(CurveError::InvalidStarSet("scale must be positive".into()));
        }
        Ok(Self {
            k,
            side,
            angle_indices,
            scale,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn angle_indices(&self) -> &[u32] {
        &self.angle_indices
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.angle_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angle_indices.is_empty()
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self, CurveError> {
        Self::new(self.k, self.side, self.angle_indices.clone(), scale)
    }

    pub fn angles(&self) -> Vec<f64> {
        let k = f64::from(self.k);
        self.angle_indices
            .iter()
            .map(|&l| match self.side {
                Side::Plus => 2.0 * PI * f64::from(l) / k,
                Side::Minus => (2.0 * f64::from(l) + 1.0) * PI / k,
            })
            .collect()
    }

    /// Unit directions `e^{iθ_j}`.
    pub fn directions(&self) -> Vec<Complex64> {
        self.angles()
            .into_iter()
            .map(|theta| Complex64::from_polar(1.0, theta))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Singular,
    RegularInterior,
    RegularBoundary,
}

impl PointClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::Singular => "singular",
            PointClass::RegularInterior => "regular_interior",
            PointClass::RegularBoundary => "regular_boundary",
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PointClass {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "singular" => Ok(PointClass::Singular),
            "regular_interior" => Ok(PointClass::RegularInterior),
            "regular_boundary" => Ok(PointClass::RegularBoundary),
            other => Err(CurveError::InvalidGerm(format!(
                "unknown point class `{other}` (expected singular, regular_interior or regular_boundary)"
            ))),
        }
    }
}

/// A real curve germ at `basepoint`, given by its Puiseux branch and the star
/// sets picking out the real branches.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveGerm {
    name: String,
    basepoint: Vec<f64>,
    branch: PuiseuxBranch,
    star_plus: Option<StarSet>,
    star_minus: Option<StarSet>,
    point_class: PointClass,
}

impl CurveGerm {
    pub fn new(
        name: impl Into<String>,
        basepoint: Vec<f64>,
        branch: PuiseuxBranch,
        star_plus: Option<StarSet>,
        star_minus: Option<StarSet>,
        point_class: PointClass,
    ) -> Result<Self, CurveError> {
        let k = branch.k();
        if basepoint.len() != branch.ambient_dim() {
            return Err(CurveError::InvalidGerm(format!(
                "basepoint has {} coordinates, branch lives in dimension {}",
                basepoint.len(),
                branch.ambient_dim()
            )));
        }
        if basepoint.iter().any(|x| !x.is_finite()) {
            return Err(CurveError::InvalidGerm("basepoint must be finite".into()));
        }
        for star in star_plus.iter().chain(star_minus.iter()) {
            if star.k() != k {
                return Err(CurveError::InvalidGerm(format!(
                    "star set built for k = {}, branch has k = {k}",
                    star.k()
                )));
            }
        }
        let segments = star_plus.as_ref().map_or(0, StarSet::len) + star_minus.as_ref().map_or(0, StarSet::len);
        match point_class {
            PointClass::Singular if k < 2 => {
                return Err(CurveError::InvalidGerm("a singular germ needs k >= 2".into()))
            }
            PointClass::RegularInterior | PointClass::RegularBoundary if k != 1 => {
                return Err(CurveError::InvalidGerm(format!(
                    "a regular germ needs k = 1, got k = {k}"
                )))
            }
            PointClass::RegularInterior if segments != 2 => {
                return Err(CurveError::InvalidGerm(
                    "a regular interior germ has one segment on each side".into(),
                ))
            }
            PointClass::RegularBoundary if segments != 1 => {
                return Err(CurveError::InvalidGerm(
                    "a regular boundary germ has exactly one segment".into(),
                ))
            }
            _ if segments == 0 => {
                return Err(CurveError::InvalidGerm(
                    "at least one real branch segment is required".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            name: name.into(),
            basepoint,
            branch,
            star_plus,
            star_minus,
            point_class,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basepoint(&self) -> &[f64] {
        &self.basepoint
    }

    pub fn branch(&self) -> &PuiseuxBranch {
        &self.branch
    }

    pub fn star_plus(&self) -> Option<&StarSet> {
        self.star_plus.as_ref()
    }

    pub fn star_minus(&self) -> Option<&StarSet> {
        self.star_minus.as_ref()
    }

    pub fn point_class(&self) -> PointClass {
        self.point_class
    }

    pub fn ambient_dim(&self) -> usize {
        self.branch.ambient_dim()
    }

    /// Angles of every real segment, plus side first.
    pub fn segment_angles(&self) -> Vec<f64> {
        self.star_plus
            .iter()
            .chain(self.star_minus.iter())
            .flat_map(StarSet::angles)
            .collect()
    }

    /// Image `x₀ + φ(z)` in ℂⁿ.
    pub fn point_at(&self, z: Complex64) -> Result<Vec<Complex64>, CurveError> {
        let image = self.branch.eval(z)?;
        Ok(self.translate(image))
    }

    pub(crate) fn translate(&self, image: Vec<Complex64>) -> Vec<Complex64> {
        image.into_iter().zip(&self.basepoint).map(|(w, &x)| w + x).collect()
    }

    /// Ball radius of the sampled neighbourhood at scale `eps`: `ε^k` at a
    /// singular point, `ε` otherwise.
    pub fn ball_radius(&self, eps: f64) -> f64 {
        match self.point_class {
            PointClass::Singular => eps.powi(self.branch.k() as i32),
            _ => eps,
        }
    }

    /// Unit tangent direction of the real branch through the basepoint.
    pub fn tangent_vector(&self) -> Vec<f64> {
        let theta = self.segment_angles()[0];
        let rotation = Complex64::from_polar(1.0, f64::from(self.branch.k()) * theta);
        let mut v: Vec<f64> = self
            .branch
            .leading_vector()
            .into_iter()
            .map(|w| (w * rotation).re)
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-14) {
            if first < 0.0 {
                for x in &mut v {
                    *x = -*x;
                }
            }
        }
        v
    }
}

/// Identifiers of the built-in germ library.
pub const BUILTIN_GERMS: [&str; 6] = [
    "interval_interior",
    "interval_boundary",
    "cusp_2_3",
    "cusp_2_5",
    "cusp_3_4",
    "parabola_regular",
];

fn plus(k: u32, indices: &[u32]) -> Option<StarSet> {
    Some(StarSet::new(k, Side::Plus, indices.to_vec(), 1.0).expect("static star set"))
}

fn minus(k: u32, indices: &[u32]) -> Option<StarSet> {
    Some(StarSet::new(k, Side::Minus, indices.to_vec(), 1.0).expect("static star set"))
}

/// Resolves a built-in germ id.
pub fn builtin_germ(id: &str) -> Result<CurveGerm, CurveError> {
    let one = Complex64::new(1.0, 0.0);
    let line = || PuiseuxBranch::new(1, one, vec![TruncatedSeries::zero(1)]);
    let germ = match id {
        "interval_interior" => CurveGerm::new(
            id,
            vec![0.0, 0.0],
            line()?,
            plus(1, &[0]),
            minus(1, &[0]),
            PointClass::RegularInterior,
        )?,
        "interval_boundary" => CurveGerm::new(
            id,
            vec![0.0, 0.0],
            line()?,
            plus(1, &[0]),
            None,
            PointClass::RegularBoundary,
        )?,
        "cusp_2_3" | "cusp_2_5" => {
            let q = if id == "cusp_2_3" { 3 } else { 5 };
            CurveGerm::new(
                id,
                vec![0.0, 0.0],
                PuiseuxBranch::monomial_cusp(2, q)?,
                plus(2, &[0, 1]),
                None,
                PointClass::Singular,
            )?
        }
        "cusp_3_4" => CurveGerm::new(
            id,
            vec![0.0, 0.0],
            PuiseuxBranch::monomial_cusp(3, 4)?,
            plus(3, &[0]),
            minus(3, &[1]),
            PointClass::Singular,
        )?,
        "parabola_regular" => CurveGerm::new(
            id,
            vec![0.0, 0.0],
            PuiseuxBranch::new(1, one, vec![TruncatedSeries::monomial(2, one)?])?,
            plus(1, &[0]),
            minus(1, &[0]),
            PointClass::RegularInterior,
        )?,
        other => {
            return Err(CurveError::UnknownGerm {
                id: other.to_string(),
                valid: BUILTIN_GERMS.join(", "),
            })
        }
    };
    Ok(germ)
}
