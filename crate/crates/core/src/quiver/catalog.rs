//! Small quivers used throughout the tests, all over symbolic parameters.

use std::sync::Arc;

use super::{Edge, Quiver};
use crate::scalars::{sym, ParamRing, ParamScalar};

pub type Symbolic = (Quiver<ParamScalar>, Arc<ParamRing>);

fn build(vertices: &[&str], edges: &[(usize, usize)], ring: Arc<ParamRing>, q: ParamScalar, t: Vec<ParamScalar>) -> Symbolic {
    let symbols = ring.names().iter().map(|n| (n.clone(), sym(&ring, n))).collect();
    let quiver = Quiver::new(vertices.iter().map(|v| v.to_string()).collect(), edges.iter().map(|&(src, dst)| Edge { src, dst }).collect(), q, t)
        .expect("catalog quivers are well formed")
        .with_symbols(symbols);
    (quiver, ring)
}

/// One vertex `i` with `g` loops, parameters `q, t1..tg`.
pub fn jordan(g: usize) -> Symbolic {
    let mut names = vec!["q".to_string()];
    names.extend((1..=g).map(|k| format!("t{k}")));
    let ring = ParamRing::new(&names).unwrap();
    let t = (1..=g).map(|k| sym(&ring, &format!("t{k}"))).collect();
    build(&["i"], &vec![(0, 0); g], ring.clone(), sym(&ring, "q"), t)
}

/// `i → j`, parameters `q, t`.
pub fn a2() -> Symbolic {
    let ring = ParamRing::new(&["q", "t"]).unwrap();
    build(&["i", "j"], &[(0, 1)], ring.clone(), sym(&ring, "q"), vec![sym(&ring, "t")])
}

/// `i → j` with `q = s^2`, `t = s`.
pub fn a2_qserre() -> Symbolic {
    let ring = ParamRing::new(&["s"]).unwrap();
    let s = sym(&ring, "s");
    build(&["i", "j"], &[(0, 1)], ring.clone(), s.clone() * s.clone(), vec![s])
}

/// Two parallel edges `i → j`, parameters `q, t1, t2`.
pub fn kronecker() -> Symbolic {
    let ring = ParamRing::new(&["q", "t1", "t2"]).unwrap();
    build(&["i", "j"], &[(0, 1), (0, 1)], ring.clone(), sym(&ring, "q"), vec![sym(&ring, "t1"), sym(&ring, "t2")])
}

/// One vertex with two loops sharing the parameter `t`.
pub fn two_loops_equal() -> Symbolic {
    let ring = ParamRing::new(&["q", "t"]).unwrap();
    let t = sym(&ring, "t");
    build(&["i"], &[(0, 0), (0, 0)], ring.clone(), sym(&ring, "q"), vec![t.clone(), t])
}

/// Two vertices and no edges.
pub fn edgeless() -> Symbolic {
    let ring = ParamRing::new(&["q"]).unwrap();
    build(&["i", "j"], &[], ring.clone(), sym(&ring, "q"), Vec::new())
}

/// The four quivers of the cubic-vanishing suite, with short names.
pub fn test_quivers() -> Vec<(&'static str, Symbolic)> {
    vec![("jordan1", jordan(1)), ("jordan2", jordan(2)), ("a2", a2()), ("kronecker", kronecker())]
}
