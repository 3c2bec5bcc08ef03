//! Full analysis of one curve: every invariant, model and verdict.

use crate::canonical::{
    blowup, canonical_map_from, image_profile_bounded, map_degree, verify_rosenlicht, BlowupModel, ImageProfile,
    ModelComparison, ParamMap,
};
use crate::curve::CurveModel;
use crate::dualizing::{omega_sections, singularity_profile, OmegaBasis, SingularityProfile};
use crate::error::{Error, Result};
use crate::normality::{
    enforce, forms_upper_bound, ideal_generation_check, normality_profile, theorem_suite, IdealReport, NormalityProfile, TheoremVerdict,
};
use crate::sheaves::{clifford_audit, clifford_slice, AuditContext, CliffordReport};
use crate::Settings;

/// Optional stages of an analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub clifford: bool,
    pub ideals: bool,
    pub theorems: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { clifford: true, ideals: true, theorems: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub genus: usize,
    pub profile: SingularityProfile,
    pub omega: OmegaBasis,
    pub map: ParamMap,
    pub map_degree: usize,
    pub blowup: BlowupModel,
    pub image: ImageProfile,
    pub comparison: ModelComparison,
    pub normality: NormalityProfile,
    pub ideals: Option<IdealReport>,
    pub clifford: Option<Vec<CliffordReport>>,
    pub theorems: Vec<TheoremVerdict>,
}

impl Analysis {
    /// Fails on the first violated equivalence or rider.
    pub fn enforce(&self) -> Result<()> {
        enforce(&self.theorems)
    }
}

pub fn analyze(c: &CurveModel, settings: &Settings, options: &AnalyzeOptions) -> Result<Analysis> {
    c.validate()?;
    let genus = c.genus();
    let profile = singularity_profile(c, settings)?;
    let omega = omega_sections(c)?;
    let map = canonical_map_from(&omega, genus, profile.eta)?;
    let deg = map_degree(&map, &c.branch_points())?;
    if deg != 1 && deg != 2 {
        return Err(Error::DegreeMismatch(format!("canonical map has degree {deg} onto its image")));
    }
    let bl = blowup(c, settings)?;
    let bound = |l| if deg == 1 { forms_upper_bound(c, &bl, l, settings) } else { None };
    let image = image_profile_bounded(&map, deg, settings, &bound)?;
    let comparison = verify_rosenlicht(c, &omega, &map, deg, &image, &bl, settings)?;
    if comparison.rmt_verified == Some(false) {
        return Err(Error::RmtViolation(format!(
            "genus match {}, local rings {:?}, separation {}",
            comparison.genus_match, comparison.local_ring_equal, comparison.separation
        )));
    }
    let normality = normality_profile(c, &bl, &comparison, &image, settings)?;
    let ideals = if options.ideals && deg == 1 { Some(ideal_generation_check(&map, &image, settings)?) } else { None };
    let clifford = if options.clifford {
        let ctx = AuditContext { lambda: comparison.lambda.clone(), nearly_normal: profile.nearly_normal };
        let slice = clifford_slice(c, &ctx)?;
        Some(clifford_audit(c, &slice, &ctx, settings)?)
    } else {
        None
    };
    let mut a = Analysis {
        genus,
        profile,
        omega,
        map,
        map_degree: deg,
        blowup: bl,
        image,
        comparison,
        normality,
        ideals,
        clifford,
        theorems: Vec::new(),
    };
    if options.theorems {
        a.theorems = theorem_suite(c, &a, settings)?;
    }
    Ok(a)
}
