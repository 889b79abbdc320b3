//! Tutte values at `(x, y) = (-i, i)` from GF(2) linear algebra on the cut
//! space of a graph.
//!
//! `T(M(V); -i, i) = sqrt2^d * e^{i pi/4 (2|S| - 3r - sigma)}` where `d` is
//! the bicycle dimension and `sigma` Brown's invariant of the cut space `V`,
//! and the value is zero when `sigma` is undefined.

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::scalar::{QuantumPoint, Scalar};

/// A GF(2) vector packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.flip(i);
            }
        }
        v
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// A subspace of `F_2^length` given by independent basis rows.
#[derive(Clone, Debug)]
pub struct BinaryCode {
    pub length: usize,
    pub basis: Vec<BitVec>,
}

impl BinaryCode {
    /// Row-reduces `rows` to a basis of their span.
    pub fn from_rows(length: usize, rows: impl IntoIterator<Item = BitVec>) -> Self {
        let mut basis: Vec<BitVec> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for mut r in rows {
            for (b, &p) in basis.iter().zip(&pivots) {
                if r.get(p) {
                    r.xor_assign(b);
                }
            }
            if let Some(p) = r.lowest_set() {
                // keep earlier rows reduced against the new pivot
                for b in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&r);
                    }
                }
                basis.push(r);
                pivots.push(p);
            }
        }
        BinaryCode { length, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Brown's invariant of a code, in `Z/8`, or `NotDefined` when some bicycle
/// has weight 2 mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrownInvariant {
    Defined(u8),
    NotDefined,
}

/// The cut space: row space of the vertex-edge incidence matrix mod 2 with
/// one column per parallel copy. Loops give zero columns.
pub fn graph_to_binary_code(g: &Multigraph) -> BinaryCode {
    let length = g.total_multiplicity() as usize;
    let mut col = 0usize;
    let slots = g.id_bound();
    let mut rows: Vec<BitVec> = vec![BitVec::zeros(length); slots];
    for e in g.edges() {
        for _ in 0..e.mult {
            if !e.is_loop() {
                rows[e.u as usize].flip(col);
                rows[e.v as usize].flip(col);
            }
            col += 1;
        }
    }
    BinaryCode::from_rows(length, rows)
}

/// `dim(V ∩ V^⊥)`: the corank of the Gram matrix of the basis.
pub fn bicycle_dimension(c: &BinaryCode) -> usize {
    let n = c.dim();
    let gram = (0..n).map(|i| {
        let bits: Vec<bool> = (0..n).map(|j| c.basis[i].dot(&c.basis[j])).collect();
        BitVec::from_bits(&bits)
    });
    n - BinaryCode::from_rows(n, gram).dim()
}

/// Result of the block reduction: the invariant plus the radical dimension.
fn reduce(c: &BinaryCode) -> (BrownInvariant, usize) {
    let q = |v: &BitVec| v.weight() % 4;
    let mut rest: Vec<BitVec> = c.basis.clone();
    let mut sigma: i64 = 0;

    // Odd vectors split off one-dimensional blocks.
    while let Some(pos) = rest.iter().position(|v| v.weight() % 2 == 1) {
        let v = rest.swap_remove(pos);
        sigma += if q(&v) == 1 { 1 } else { -1 };
        for w in rest.iter_mut() {
            if w.dot(&v) {
                w.xor_assign(&v);
            }
        }
    }

    // All remaining vectors are even; peel off hyperbolic planes.
    let mut radical: Vec<BitVec> = Vec::new();
    while let Some(u) = rest.pop() {
        let Some(pos) = rest.iter().position(|w| w.dot(&u)) else {
            radical.push(u);
            continue;
        };
        let w = rest.swap_remove(pos);
        if q(&u) == 2 && q(&w) == 2 {
            sigma += 4;
        }
        for z in rest.iter_mut() {
            let (zw, zu) = (z.dot(&w), z.dot(&u));
            if zw {
                z.xor_assign(&u);
            }
            if zu {
                z.xor_assign(&w);
            }
        }
    }
    // A vector set aside is orthogonal to everything left, hence to all later planes.
    let d = radical.len();
    // q is additive on the radical, so checking a basis suffices.
    if radical.iter().any(|v| q(v) == 2) {
        return (BrownInvariant::NotDefined, d);
    }
    (BrownInvariant::Defined(sigma.rem_euclid(8) as u8), d)
}

/// Brown's invariant via an orthogonal block decomposition of the quadratic
/// form `x -> |x| mod 4`. Polynomial in length and dimension.
pub fn brown_invariant(c: &BinaryCode) -> BrownInvariant {
    reduce(c).0
}

/// Brown's invariant straight from the Gauss sum `sum_{x in V} i^{|x|}`,
/// enumerating all `2^dim` codewords.
pub fn brown_invariant_brute(c: &BinaryCode, max_dim: usize) -> Result<BrownInvariant> {
    let (re, im) = gauss_sum(c, max_dim)?;
    if re == 0 && im == 0 {
        return Ok(BrownInvariant::NotDefined);
    }
    let s = |x: i128| x.signum();
    let sigma = match (s(re), s(im)) {
        (1, 0) => 0,
        (1, 1) if re == im => 1,
        (0, 1) => 2,
        (-1, 1) if -re == im => 3,
        (-1, 0) => 4,
        (-1, -1) if re == im => 5,
        (0, -1) => 6,
        (1, -1) if re == -im => 7,
        _ => {
            return Err(Error::Arithmetic(format!(
                "Gauss sum {re}+{im}i is not on an eighth-root ray"
            )))
        }
    };
    Ok(BrownInvariant::Defined(sigma))
}

/// `sum_{x in V} i^{|x|}` as Gaussian integer, by Gray-code enumeration.
pub fn gauss_sum(c: &BinaryCode, max_dim: usize) -> Result<(i128, i128)> {
    let n = c.dim();
    if n > max_dim {
        return Err(Error::Budget(format!(
            "code dimension {n} exceeds enumeration budget {max_dim}"
        )));
    }
    let mut counts = [0i128; 4];
    let mut x = BitVec::zeros(c.length);
    counts[0] += 1;
    for step in 1u64..(1u64 << n) {
        x.xor_assign(&c.basis[step.trailing_zeros() as usize]);
        counts[(x.weight() % 4) as usize] += 1;
    }
    Ok((counts[0] - counts[2], counts[1] - counts[3]))
}

/// `T(g; -i, i)` expressed in the scalar field of grid index `k`.
pub fn tutte_clifford_point<S: Scalar>(g: &Multigraph, k: u32) -> S {
    let code = graph_to_binary_code(g);
    let (brown, d) = reduce(&code);
    let BrownInvariant::Defined(sigma) = brown else {
        return S::zero(k);
    };
    let size = g.total_multiplicity() as i64;
    let r = code.dim() as i64;
    let exponent = (2 * size - 3 * r - sigma as i64).rem_euclid(8);
    let mut value = S::eighth_root(k, exponent);
    let sqrt2 = S::sqrt2(k);
    for _ in 0..d {
        value = value * &sqrt2;
    }
    value
}

/// `T(g; x(k), y(k))` for a graph whose multiplicities are all multiples of
/// `k`, by rescaling to the Clifford point.
pub fn vertigan_reduce<S: Scalar>(g: &Multigraph, point: &QuantumPoint<S>) -> Result<S> {
    let k = point.k;
    if !g.is_vertigan(k as u64) {
        return Err(Error::Contract(format!(
            "graph has multiplicities that are not multiples of {k}"
        )));
    }
    let reduced = g.map_multiplicities(|m| m / k as u64);
    let clifford: S = tutte_clifford_point(&reduced, k);
    Ok(clifford * &point.vertigan_base.pow(-(g.rank() as i64))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycloScalar;

    fn g(n: usize, edges: &[(u32, u32, u64)]) -> Multigraph {
        Multigraph::from_edges(n, edges).unwrap()
    }

    fn code(length: usize, rows: &[&str]) -> BinaryCode {
        BinaryCode::from_rows(
            length,
            rows.iter()
                .map(|r| BitVec::from_bits(&r.chars().map(|c| c == '1').collect::<Vec<_>>())),
        )
    }

    fn triangle() -> Multigraph {
        g(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    }

    fn c4() -> Multigraph {
        g(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    }

    #[test]
    fn cut_space_dimensions() {
        assert_eq!(graph_to_binary_code(&triangle()).dim(), 2);
        assert_eq!(graph_to_binary_code(&g(1, &[(0, 0, 1)])).dim(), 0);
        let double = graph_to_binary_code(&g(2, &[(0, 1, 2)]));
        assert_eq!((double.length, double.dim()), (2, 1));
    }

    #[test]
    fn bicycle_dimension_anchors() {
        assert_eq!(bicycle_dimension(&graph_to_binary_code(&triangle())), 0);
        assert_eq!(bicycle_dimension(&graph_to_binary_code(&c4())), 1);
        assert_eq!(bicycle_dimension(&code(3, &[])), 0);
    }

    #[test]
    fn brown_anchors() {
        let t = graph_to_binary_code(&triangle());
        assert_eq!(gauss_sum(&t, 20).unwrap(), (-2, 0));
        assert_eq!(brown_invariant(&t), BrownInvariant::Defined(4));
        let c = graph_to_binary_code(&c4());
        assert_eq!(gauss_sum(&c, 20).unwrap(), (-4, 0));
        assert_eq!(brown_invariant(&c), BrownInvariant::Defined(4));
        let bad = code(4, &["1100"]);
        assert_eq!(brown_invariant(&bad), BrownInvariant::NotDefined);
        assert_eq!(brown_invariant_brute(&bad, 20).unwrap(), BrownInvariant::NotDefined);
    }

    #[test]
    fn clifford_anchors() {
        let k = 1;
        let t: CycloScalar = tutte_clifford_point(&triangle(), k);
        assert_eq!(t, CycloScalar::from_i64(k, -1));
        let c: CycloScalar = tutte_clifford_point(&c4(), k);
        assert_eq!(c, CycloScalar::i(k) - &CycloScalar::one(k));
        let lp: CycloScalar = tutte_clifford_point(&g(1, &[(0, 0, 1)]), k);
        assert_eq!(lp, CycloScalar::i(k));
        let edge: CycloScalar = tutte_clifford_point(&g(2, &[(0, 1, 1)]), k);
        assert_eq!(edge, -CycloScalar::i(k));
        // double edge: x + y = 0 at the Clifford point
        let dbl: CycloScalar = tutte_clifford_point(&g(2, &[(0, 1, 2)]), k);
        assert!(dbl.is_zero());
    }

    #[test]
    fn vertigan_rejects_non_multiples() {
        let p = QuantumPoint::<CycloScalar>::new(2).unwrap();
        assert!(matches!(
            vertigan_reduce(&g(2, &[(0, 1, 3)]), &p),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn vertigan_double_edge_k2() {
        // multiedge of multiplicity 2: coloop factor x + y
        let p = QuantumPoint::<CycloScalar>::new(2).unwrap();
        let got = vertigan_reduce(&g(2, &[(0, 1, 2)]), &p).unwrap();
        assert_eq!(got, p.coloop_factor(2));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_code() -> impl Strategy<Value = BinaryCode> {
            (1usize..40).prop_flat_map(|len| {
                prop::collection::vec(prop::collection::vec(any::<bool>(), len), 0..16)
                    .prop_map(move |rows| {
                        BinaryCode::from_rows(len, rows.iter().map(|r| BitVec::from_bits(r)))
                    })
            })
        }

        proptest! {
            #[test]
            fn reduction_matches_gauss_sum(c in arb_code()) {
                prop_assert_eq!(brown_invariant(&c), brown_invariant_brute(&c, 20).unwrap());
                let (brown, d) = reduce(&c);
                prop_assert_eq!(d, bicycle_dimension(&c));
                if let BrownInvariant::Defined(_) = brown {
                    let (re, im) = gauss_sum(&c, 20).unwrap();
                    prop_assert_eq!(re * re + im * im, 1i128 << (d + c.dim()));
                }
            }
        }
    }
}
