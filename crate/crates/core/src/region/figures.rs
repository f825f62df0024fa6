//! Named figure parameterizations.
//!
//! Captions give parameter ranges; each entry fixes a representative value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{int, rat, Rational};
use crate::region::boundary::{build_region, RegionBoundary};
use crate::region::export::{to_svg_titled, DEFAULT_ARC_SAMPLES};
use crate::scenario::{Scenario, SingularityKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureSpec {
    pub name: &'static str,
    pub alias: &'static str,
    pub caption: &'static str,
    #[serde(with = "crate::numeric::serde_rational")]
    pub gamma: Rational,
    #[serde(with = "crate::numeric::serde_rational")]
    pub d: Rational,
    pub kind: SingularityKind,
}

impl FigureSpec {
    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(self.gamma.clone(), self.kind, self.d.clone())
    }

    pub fn region(&self) -> Result<RegionBoundary> {
        build_region(&self.scenario()?)
    }

    pub fn svg(&self) -> Result<String> {
        Ok(to_svg_titled(
            &self.region()?,
            DEFAULT_ARC_SAMPLES,
            self.caption,
        ))
    }
}

fn entry(
    name: &'static str,
    alias: &'static str,
    caption: &'static str,
    gamma: Rational,
    d: Rational,
    kind: SingularityKind,
) -> FigureSpec {
    FigureSpec {
        name,
        alias,
        caption,
        gamma,
        d,
        kind,
    }
}

pub fn figures() -> Vec<FigureSpec> {
    use SingularityKind::{General, Slice};
    vec![
        entry("fig1", "slice-d0", "d=0", int(1), int(0), Slice),
        entry("fig2", "slice-low-d", "0<d<1", int(1), rat(1, 2), Slice),
        entry("fig3", "slice-d1", "d=1", int(1), int(1), Slice),
        entry("fig4", "slice-high-d", "1<d<3", int(1), int(2), Slice),
        entry(
            "fig5",
            "frac-upper-low-d",
            "3/4<=gamma<1, 0<d<=5-4gamma",
            rat(17, 20),
            rat(2, 3),
            Slice,
        ),
        entry(
            "fig6",
            "frac-lower-low-d",
            "1/2<gamma<3/4, 0<d<=5-4gamma",
            rat(13, 20),
            rat(2, 3),
            Slice,
        ),
        entry(
            "fig7",
            "frac-upper-high-d",
            "3/4<=gamma<1, 5-4gamma<d<3",
            rat(17, 20),
            int(2),
            Slice,
        ),
        entry(
            "fig8",
            "frac-lower-high-d",
            "1/2<gamma<3/4, 5-4gamma<d<3",
            rat(13, 20),
            rat(5, 2),
            Slice,
        ),
        entry(
            "fig9",
            "general-low-d",
            "0<d<1 (general)",
            int(1),
            rat(1, 2),
            General,
        ),
        entry(
            "fig10",
            "general-d1",
            "d=1 (general)",
            int(1),
            int(1),
            General,
        ),
        entry(
            "fig11",
            "low-dissipation",
            "0<gamma<=1/2, d<3",
            rat(2, 5),
            rat(3, 2),
            Slice,
        ),
    ]
}

pub fn figure(name: &str) -> Result<FigureSpec> {
    let key = name.to_ascii_lowercase();
    figures()
        .into_iter()
        .find(|f| f.name == key || f.alias == key)
        .ok_or_else(|| {
            Error::UnknownFigure(format!("{name} (known: fig1..fig11 or their aliases)"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::closed_form::CaseLabel;

    #[test]
    fn registry_cases() {
        let want = [
            CaseLabel::SliceClassicalLowD,
            CaseLabel::SliceClassicalLowD,
            CaseLabel::SliceClassicalLowD,
            CaseLabel::SliceClassicalHighD,
            CaseLabel::SliceFractionalLowD,
            CaseLabel::SliceFractionalLowD,
            CaseLabel::SliceFractionalHighD,
            CaseLabel::SliceFractionalHighD,
            CaseLabel::GeneralClassical,
            CaseLabel::GeneralClassical,
            CaseLabel::SliceLowDissipation,
        ];
        for (f, c) in figures().iter().zip(want) {
            assert_eq!(CaseLabel::of(&f.scenario().unwrap()), c, "{}", f.name);
        }
        assert_eq!(figure("slice-d1").unwrap().name, "fig3");
        assert!(figure("fig12").is_err());
    }

    #[test]
    fn fig3_titled() {
        let svg = figure("fig3").unwrap().svg().unwrap();
        assert!(svg.contains("<title>d=1</title>"));
    }
}
