//! Built-in lattices.

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::lattice::GramLattice;

/// Names accepted by [`catalog`], in listing order.
pub const NAMES: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "A2", "A3", "D4", "E8", "diag(1,4)", "diag(1,9)",
    "diag(1,1,4)", "Z1xdual", "diag(1,4)xdual", "A2xdual",
];

/// Positive-definite Gram of a simply laced Dynkin diagram.
fn cartan(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    g
}

fn diag(entries: &[i64]) -> GramLattice {
    GramLattice::diag(&entries.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>()).expect("positive entries")
}

fn build(name: &str) -> Option<GramLattice> {
    let l = match name {
        "A2" => GramLattice::from_int_rows(&[vec![2, 1], vec![1, 2]]).ok()?,
        "A3" => GramLattice::from_int_rows(&cartan(3, &[(0, 1), (1, 2)])).ok()?,
        "D4" => GramLattice::from_int_rows(&cartan(4, &[(0, 1), (1, 2), (1, 3)])).ok()?,
        // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4
        "E8" => GramLattice::from_int_rows(&cartan(8, &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])).ok()?,
        "diag(1,4)" => diag(&[1, 4]),
        "diag(1,9)" => diag(&[1, 9]),
        "diag(1,1,4)" => diag(&[1, 1, 4]),
        _ => {
            if let Some(base) = name.strip_suffix("xdual") {
                let e = build(base)?;
                return Some(e.direct_product(&e.dual()).with_label(name));
            }
            let n: usize = name.strip_prefix('Z')?.parse().ok()?;
            if !(1..=8).contains(&n) {
                return None;
            }
            GramLattice::standard(n)
        }
    };
    Some(l.with_label(name))
}

pub fn catalog(name: &str) -> Result<GramLattice> {
    let canonical = NAMES.iter().find(|n| n.eq_ignore_ascii_case(name));
    canonical.and_then(|n| build(n)).ok_or_else(|| Error::UnknownCatalog {
        name: name.to_owned(),
        available: NAMES.join(", "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, RatMatrix};

    #[test]
    fn entries() {
        for n in NAMES {
            let l = catalog(n).unwrap();
            assert_eq!(l.label(), Some(*n));
        }
        let e8 = catalog("E8").unwrap();
        assert_eq!(e8.rank(), 8);
        assert_eq!(e8.det(), &int(1));
        assert!((0..8).all(|i| e8.gram()[(i, i)] == int(2)));
        assert_eq!(catalog("A2").unwrap().gram(), &RatMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]));
        assert_eq!(catalog("Z3").unwrap().gram(), &RatMatrix::identity(3));
        assert_eq!(catalog("d4").unwrap().det(), &int(4));
        let p = catalog("diag(1,4)xdual").unwrap();
        assert_eq!(p.gram(), &RatMatrix::diagonal(&[int(1), int(4), int(1), rat(1, 4)]));
        match catalog("Z9") {
            Err(Error::UnknownCatalog { available, .. }) => assert!(available.contains("E8")),
            other => panic!("{other:?}"),
        }
    }
}
