//! Complexes shipped with the crate, addressable by short name.

use crate::error::{Error, Result};
use crate::simplicial::{parse_complex, SimplicialComplex};

const DATA: &[(&str, &str)] = &[
    ("rp2", include_str!("../data/rp2.json")),
    ("bipyramid", include_str!("../data/bipyramid.json")),
    ("csaszar", include_str!("../data/csaszar.json")),
    ("moebius-brehm", include_str!("../data/moebius-brehm.json")),
    ("m2-10", include_str!("../data/m2-10.json")),
    ("m3-10", include_str!("../data/m3-10.json")),
    ("m4-11", include_str!("../data/m4-11.json")),
    ("m5-12", include_str!("../data/m5-12.json")),
];

/// Names accepted by [`builtin`].
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    DATA.iter().map(|(n, _)| *n)
}

pub fn builtin(name: &str) -> Result<SimplicialComplex> {
    let (_, text) = DATA
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    parse_complex(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_parse() {
        for name in builtin_names() {
            let k = builtin(name).unwrap();
            assert_eq!(k.dim(), 2, "{name}");
        }
        assert!(matches!(builtin("torus"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn f_vectors() {
        let expect = [
            ("rp2", vec![6, 15, 10]),
            ("bipyramid", vec![5, 9, 6]),
            ("csaszar", vec![7, 21, 14]),
            ("moebius-brehm", vec![9, 24, 15]),
            ("m2-10", vec![10, 36, 24]),
            ("m3-10", vec![10, 42, 28]),
            ("m4-11", vec![11, 51, 34]),
            ("m5-12", vec![12, 60, 40]),
        ];
        for (name, f) in expect {
            assert_eq!(builtin(name).unwrap().f_vector().0, f, "{name}");
        }
    }
}
