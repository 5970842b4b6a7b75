//! Bundled small triangulations.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::triangulation::{GlueSpec, Gluing, Triangulation};

/// Names accepted by [`census`].
pub const CENSUS_NAMES: [&str; 9] = [
    "s3_2tet",
    "s3_3tet",
    "rp3_2tet",
    "lens_3_1",
    "lens_4_1",
    "s2xs1",
    "t3",
    "solid_torus_ideal",
    "hopf_complement_ideal",
];

type Line = (usize, usize, usize, usize, [usize; 4]);

const S3_2TET: &[Line] = &[
    (0, 0, 0, 1, [1, 0, 2, 3]),
    (0, 2, 1, 0, [1, 2, 0, 3]),
    (0, 3, 1, 1, [0, 2, 3, 1]),
    (1, 2, 1, 3, [0, 1, 3, 2]),
];

const RP3_2TET: &[Line] = &[
    (0, 0, 0, 1, [1, 0, 2, 3]),
    (0, 2, 1, 0, [1, 2, 0, 3]),
    (0, 3, 1, 1, [3, 0, 2, 1]),
    (1, 2, 1, 3, [2, 0, 3, 1]),
];

const LENS_3_1: &[Line] = &[
    (0, 0, 0, 1, [1, 0, 2, 3]),
    (0, 2, 1, 0, [2, 3, 0, 1]),
    (0, 3, 1, 1, [2, 3, 0, 1]),
    (1, 2, 1, 3, [1, 2, 3, 0]),
];

const LENS_4_1: &[Line] = &[(0, 0, 0, 1, [1, 2, 3, 0]), (0, 2, 0, 3, [1, 2, 3, 0])];

const S2XS1: &[Line] = &[
    (0, 0, 0, 1, [1, 2, 3, 0]),
    (0, 2, 1, 0, [2, 3, 0, 1]),
    (0, 3, 1, 1, [2, 3, 0, 1]),
    (1, 2, 1, 3, [1, 2, 3, 0]),
];

const T3: &[Line] = &[
    (0, 0, 3, 3, [3, 0, 1, 2]),
    (0, 1, 2, 1, [0, 1, 2, 3]),
    (0, 2, 1, 2, [0, 1, 2, 3]),
    (0, 3, 4, 0, [1, 2, 3, 0]),
    (1, 0, 5, 3, [3, 0, 1, 2]),
    (1, 1, 4, 1, [0, 1, 2, 3]),
    (1, 3, 2, 0, [1, 2, 3, 0]),
    (2, 2, 3, 2, [0, 1, 2, 3]),
    (2, 3, 5, 0, [1, 2, 3, 0]),
    (3, 0, 4, 3, [3, 0, 1, 2]),
    (3, 1, 5, 1, [0, 1, 2, 3]),
    (4, 2, 5, 2, [0, 1, 2, 3]),
];

const SOLID_TORUS_IDEAL: &[Line] = &[
    (0, 0, 0, 1, [1, 0, 2, 3]),
    (0, 2, 1, 0, [1, 2, 0, 3]),
    (0, 3, 1, 1, [0, 2, 3, 1]),
    (1, 2, 1, 3, [1, 2, 3, 0]),
];

const HOPF_COMPLEMENT_IDEAL: &[Line] = &[
    (0, 0, 2, 0, [0, 1, 2, 3]),
    (0, 1, 1, 3, [0, 3, 1, 2]),
    (0, 2, 1, 2, [0, 1, 2, 3]),
    (0, 3, 1, 1, [0, 2, 3, 1]),
    (1, 0, 3, 0, [0, 1, 2, 3]),
    (2, 1, 3, 3, [0, 3, 1, 2]),
    (2, 2, 3, 2, [0, 1, 2, 3]),
    (2, 3, 3, 1, [0, 2, 3, 1]),
];

fn build(n: usize, lines: &[Line]) -> Triangulation {
    let specs: Vec<GlueSpec> = lines
        .iter()
        .map(|&(t, f, t2, f2, perm)| GlueSpec { tet: t, face: f, target: Gluing { tet: t2, face: f2, perm } })
        .collect();
    Triangulation::new(n, &specs).expect("bundled triangulations are valid")
}

/// A bundled triangulation by name.
pub fn census(name: &str) -> Result<Triangulation> {
    Ok(match name {
        "s3_2tet" => build(2, S3_2TET),
        "s3_3tet" => {
            let base = build(2, S3_2TET);
            let face = (0..base.skeleton().num_faces)
                .find(|&f| {
                    let (t, face) = base.skeleton().face_rep[f];
                    base.gluing(t, face).tet != t
                })
                .expect("the two tetrahedra share a face");
            base.pachner_23(face)?
        }
        "rp3_2tet" => build(2, RP3_2TET),
        "lens_3_1" => build(2, LENS_3_1),
        "lens_4_1" => build(1, LENS_4_1),
        "s2xs1" => build(2, S2XS1),
        "t3" => build(6, T3),
        "solid_torus_ideal" => build(2, SOLID_TORUS_IDEAL),
        "hopf_complement_ideal" => build(4, HOPF_COMPLEMENT_IDEAL),
        _ => return Err(Error::UnknownName(format!("census:{name}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in CENSUS_NAMES {
            let t = census(name).unwrap();
            assert!(t.num_tets() > 0, "{name}");
        }
        assert!(matches!(census("poincare"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn closed_entries_are_manifolds() {
        for name in ["s3_2tet", "s3_3tet", "rp3_2tet", "lens_3_1", "lens_4_1", "s2xs1", "t3"] {
            let t = census(name).unwrap();
            let c = t.classify_vertices();
            assert!(c.inner.iter().all(|&x| x), "{name}: {:?}", c.link_euler);
            assert_eq!(t.euler_characteristic(), 0, "{name}");
        }
        let s3 = census("s3_2tet").unwrap();
        assert_eq!((s3.num_tets(), s3.skeleton().num_vertices), (2, 1));
        assert_eq!(census("s3_3tet").unwrap().num_tets(), 3);
        assert_eq!(census("rp3_2tet").unwrap().skeleton().num_vertices, 1);
    }

    #[test]
    fn ideal_entries_have_torus_cusps() {
        let st = census("solid_torus_ideal").unwrap().classify_vertices();
        assert_eq!(st.link_euler, [0]);
        assert_eq!(st.num_singular(), 1);
        let hopf = census("hopf_complement_ideal").unwrap().classify_vertices();
        let tori = hopf.link_euler.iter().filter(|&&x| x == 0).count();
        assert_eq!(tori, 2);
        assert_eq!(hopf.num_singular(), 2);
    }

    #[test]
    fn disjoint_union_keeps_links() {
        let s3 = census("s3_2tet").unwrap();
        let u = s3.disjoint_union(&s3);
        let c = u.classify_vertices();
        assert_eq!(c.inner, [true, true]);
    }
}
