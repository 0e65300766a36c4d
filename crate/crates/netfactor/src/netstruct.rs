//! Graph-structural derivations from a horizontal network: Laplacian
//! eigenbasis, maximum spanning tree masks, degree sequences.

use nalgebra::DMatrix;
use ndarray::Array1;

use crate::matcore::{self, DenseMatrix};
use crate::{Error, Result};

/// Symmetric nonnegative n×n relation matrix with zero diagonal; one level
/// of same-character relations (a social network, a citation network, ...).
///
/// The constructor rejects asymmetric, negative or nonzero-diagonal input
/// rather than repairing it, so data errors surface early.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalNetwork {
    weights: DenseMatrix,
}

impl HorizontalNetwork {
    pub fn new(weights: DenseMatrix) -> Result<Self> {
        let (rows, cols) = weights.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        matcore::ensure_finite(&weights, "horizontal network")?;
        for i in 0..rows {
            if weights[[i, i]] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: weights[[i, i]],
                });
            }
            for j in (i + 1)..cols {
                let (a, b) = (weights[[i, j]], weights[[j, i]]);
                if a != b {
                    return Err(Error::Asymmetric { i, j, a, b });
                }
                if a < 0.0 {
                    return Err(Error::NegativeEntry { i, j, value: a });
                }
            }
        }
        Ok(Self { weights })
    }

    /// Number of nodes n.
    pub fn size(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }
}

/// Binary edge-indicator matrices for a maximum spanning forest.
///
/// `mask` marks the forest edges, `complement` every remaining off-diagonal
/// position; each off-diagonal position lies in exactly one of the two.
/// `weighted` keeps the forest edges at their original weights (`T ⊙ H`),
/// which is the tree network the tree-preserving solver reconstructs.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeMask {
    pub mask: DenseMatrix,
    pub complement: DenseMatrix,
    pub weighted: DenseMatrix,
    edge_count: usize,
    component_count: usize,
}

impl TreeMask {
    /// Number of undirected edges in the forest.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of connected components of the source network.
    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn size(&self) -> usize {
        self.mask.nrows()
    }
}

/// First-k Laplacian eigenpairs: columns of `basis` are orthonormal
/// eigenvectors (signs canonicalized), `eigenvalues` sorted ascending.
#[derive(Debug, Clone)]
pub struct CommunityBasis {
    pub basis: DenseMatrix,
    pub eigenvalues: Vec<f64>,
}

/// Unnormalized graph Laplacian `L = D − H` with `d_ii = Σ_j h_ij`.
pub fn laplacian(h: &HorizontalNetwork) -> DenseMatrix {
    let n = h.size();
    let deg = matcore::row_sums(h.weights());
    let mut l = h.weights().mapv(|v| -v);
    for i in 0..n {
        l[[i, i]] = deg[i];
    }
    l
}

/// Eigenpairs of `laplacian(h)` with the k smallest eigenvalues, ascending.
///
/// Each column is sign-canonicalized so its largest-magnitude entry is
/// positive (first such index wins ties); downstream updates absorb any
/// remaining negativity through the P⁺/P⁻ split.
pub fn community_basis(h: &HorizontalNetwork, k: usize) -> Result<CommunityBasis> {
    let n = h.size();
    if k == 0 || k > n {
        return Err(Error::InvalidConfig(format!(
            "community basis needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let l = laplacian(h);
    let lm = DMatrix::from_fn(n, n, |i, j| l[[i, j]]);
    let eig = nalgebra::SymmetricEigen::try_new(lm.clone(), f64::EPSILON, 0).ok_or({
        Error::EigenFailure { residual: f64::NAN }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });

    let mut basis = DenseMatrix::zeros((n, k));
    let mut eigenvalues = Vec::with_capacity(k);
    for (col, &idx) in order.iter().take(k).enumerate() {
        eigenvalues.push(eig.eigenvalues[idx]);
        let v = eig.eigenvectors.column(idx);
        let mut anchor = 0;
        for i in 1..n {
            if v[i].abs() > v[anchor].abs() {
                anchor = i;
            }
        }
        let flip = if v[anchor] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            basis[[i, col]] = flip * v[i];
        }
    }

    // residual check; SymmetricEigen rarely fails outright
    let mut worst = 0.0f64;
    for (col, &lambda) in eigenvalues.iter().enumerate() {
        for i in 0..n {
            let mut lv = 0.0;
            for j in 0..n {
                lv += l[[i, j]] * basis[[j, col]];
            }
            worst = worst.max((lv - lambda * basis[[i, col]]).abs());
        }
    }
    if !worst.is_finite() || worst > 1e-7 {
        return Err(Error::EigenFailure { residual: worst });
    }

    Ok(CommunityBasis { basis, eigenvalues })
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Maximum spanning forest of `h` via Kruskal with union-find.
///
/// Ties between equal-weight edges break by ascending (row, col) order, so
/// the result is deterministic. Zero-weight pairs are non-edges; an edgeless
/// network yields an empty mask.
pub fn max_spanning_tree(h: &HorizontalNetwork) -> TreeMask {
    let n = h.size();
    let w = h.weights();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if w[[i, j]] > 0.0 {
                edges.push((i, j));
            }
        }
    }
    edges.sort_by(|&(i1, j1), &(i2, j2)| {
        w[[i2, j2]]
            .partial_cmp(&w[[i1, j1]])
            .expect("weights are finite")
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });

    let mut uf = UnionFind::new(n);
    let mut mask = DenseMatrix::zeros((n, n));
    let mut weighted = DenseMatrix::zeros((n, n));
    let mut edge_count = 0;
    for (i, j) in edges {
        if uf.union(i, j) {
            mask[[i, j]] = 1.0;
            mask[[j, i]] = 1.0;
            weighted[[i, j]] = w[[i, j]];
            weighted[[j, i]] = w[[i, j]];
            edge_count += 1;
        }
    }

    let mut complement = DenseMatrix::ones((n, n));
    for i in 0..n {
        complement[[i, i]] = 0.0;
    }
    let complement = complement - &mask;

    TreeMask {
        mask,
        complement,
        weighted,
        edge_count,
        component_count: n - edge_count,
    }
}

/// Weighted degree sequence `H · 1`.
pub fn degree_sequence(h: &HorizontalNetwork) -> Array1<f64> {
    matcore::row_sums(h.weights())
}

/// Number of undirected edges shared by two forests.
pub fn tree_overlap(t1: &TreeMask, t2: &TreeMask) -> Result<usize> {
    if t1.size() != t2.size() {
        return Err(Error::DimensionMismatch {
            op: "tree_overlap",
            left: format!("{0}x{0}", t1.size()),
            right: format!("{0}x{0}", t2.size()),
        });
    }
    let n = t1.size();
    let mut shared = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if t1.mask[[i, j]] > 0.0 && t2.mask[[i, j]] > 0.0 {
                shared += 1;
            }
        }
    }
    Ok(shared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_network(n: usize, density: f64, seed: u64) -> HorizontalNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = DenseMatrix::zeros((n, n));
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < density {
                    let v: f64 = rng.random();
                    w[[i, j]] = v;
                    w[[j, i]] = v;
                }
            }
        }
        HorizontalNetwork::new(w).unwrap()
    }

    fn network_from(w: DenseMatrix) -> HorizontalNetwork {
        HorizontalNetwork::new(w).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let asym = array![[0.0, 1.0], [0.5, 0.0]];
        assert!(matches!(
            HorizontalNetwork::new(asym),
            Err(Error::Asymmetric { .. })
        ));
        let diag = array![[1.0, 0.0], [0.0, 0.0]];
        assert!(matches!(
            HorizontalNetwork::new(diag),
            Err(Error::NonzeroDiagonal { .. })
        ));
        let neg = array![[0.0, -1.0], [-1.0, 0.0]];
        assert!(matches!(
            HorizontalNetwork::new(neg),
            Err(Error::NegativeEntry { .. })
        ));
        let rect = DenseMatrix::zeros((2, 3));
        assert!(matches!(
            HorizontalNetwork::new(rect),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn laplacian_two_node_edge() {
        let h = network_from(array![[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(laplacian(&h), array![[1.0, -1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn laplacian_edgeless_is_zero() {
        let h = network_from(DenseMatrix::zeros((4, 4)));
        assert_eq!(laplacian(&h), DenseMatrix::zeros((4, 4)));
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        for seed in 0..10 {
            let h = random_network(8, 0.6, seed);
            let l = laplacian(&h);
            for s in matcore::row_sums(&l) {
                assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn community_basis_connected_k1_is_constant_vector() {
        let h = random_network(6, 1.0, 3);
        let cb = community_basis(&h, 1).unwrap();
        assert!(cb.eigenvalues[0].abs() < 1e-8);
        let expect = 1.0 / (6.0f64).sqrt();
        for i in 0..6 {
            assert!((cb.basis[[i, 0]].abs() - expect).abs() < 1e-8);
        }
        // canonicalized sign: constant vector comes out positive
        assert!(cb.basis[[0, 0]] > 0.0);
    }

    #[test]
    fn community_basis_disconnected_cliques() {
        // two 3-cliques: kernel is spanned by the component indicators
        let mut w = DenseMatrix::zeros((6, 6));
        for block in [[0, 1, 2], [3, 4, 5]] {
            for &i in &block {
                for &j in &block {
                    if i != j {
                        w[[i, j]] = 1.0;
                    }
                }
            }
        }
        let h = network_from(w);
        let cb = community_basis(&h, 2).unwrap();
        assert!(cb.eigenvalues[0].abs() < 1e-8);
        assert!(cb.eigenvalues[1].abs() < 1e-8);
        // each eigenvector is constant within each clique
        for col in 0..2 {
            for block in [[0usize, 1, 2], [3, 4, 5]] {
                let v0 = cb.basis[[block[0], col]];
                for &i in &block[1..] {
                    assert!((cb.basis[[i, col]] - v0).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn community_basis_residuals_and_orthonormality() {
        let h = random_network(8, 0.8, 11);
        let l = laplacian(&h);
        let cb = community_basis(&h, 3).unwrap();
        for c in 0..3 {
            for i in 0..8 {
                let mut lv = 0.0;
                for j in 0..8 {
                    lv += l[[i, j]] * cb.basis[[j, c]];
                }
                assert!((lv - cb.eigenvalues[c] * cb.basis[[i, c]]).abs() < 1e-8);
            }
            assert!(cb.eigenvalues[c] > -1e-8);
            for c2 in 0..3 {
                let dot: f64 = (0..8).map(|i| cb.basis[[i, c]] * cb.basis[[i, c2]]).sum();
                let expect = if c == c2 { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-8);
            }
        }
        assert!(cb.eigenvalues.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn community_basis_rejects_bad_k() {
        let h = random_network(4, 1.0, 0);
        assert!(community_basis(&h, 0).is_err());
        assert!(community_basis(&h, 5).is_err());
    }

    #[test]
    fn mst_path_graph_is_itself() {
        let h = network_from(array![
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0]
        ]);
        let t = max_spanning_tree(&h);
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.mask, h.weights().mapv(|v| if v > 0.0 { 1.0 } else { 0.0 }));
        assert_eq!(t.weighted, *h.weights());
    }

    #[test]
    fn mst_triangle_drops_lightest() {
        let h = network_from(array![
            [0.0, 3.0, 2.0],
            [3.0, 0.0, 1.0],
            [2.0, 1.0, 0.0]
        ]);
        let t = max_spanning_tree(&h);
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.mask[[0, 1]], 1.0);
        assert_eq!(t.mask[[0, 2]], 1.0);
        assert_eq!(t.mask[[1, 2]], 0.0);
        assert_eq!(t.complement[[1, 2]], 1.0);
        assert_eq!(t.complement[[0, 1]], 0.0);
        for i in 0..3 {
            assert_eq!(t.complement[[i, i]], 0.0);
        }
    }

    #[test]
    fn mst_edgeless_is_empty() {
        let h = network_from(DenseMatrix::zeros((4, 4)));
        let t = max_spanning_tree(&h);
        assert_eq!(t.edge_count(), 0);
        assert_eq!(t.component_count(), 4);
    }

    /// Brute-force maximum spanning forest weight by enumerating all edge
    /// subsets of size (n - components) that are acyclic. Only for tiny n.
    pub(crate) fn brute_force_msf_weight(h: &HorizontalNetwork) -> f64 {
        let n = h.size();
        let w = h.weights();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if w[[i, j]] > 0.0 {
                    edges.push((i, j, w[[i, j]]));
                }
            }
        }
        let m = edges.len();
        let mut best = 0.0f64;
        for subset in 0u64..(1 << m) {
            let mut uf = UnionFind::new(n);
            let mut total = 0.0;
            let mut acyclic = true;
            for (b, &(i, j, wt)) in edges.iter().enumerate() {
                if subset & (1 << b) != 0 {
                    if !uf.union(i, j) {
                        acyclic = false;
                        break;
                    }
                    total += wt;
                }
            }
            if acyclic && total > best {
                best = total;
            }
        }
        best
    }

    #[test]
    fn mst_matches_exhaustive_enumeration() {
        for seed in 0..20 {
            let h = random_network(6, 0.7, 400 + seed);
            let t = max_spanning_tree(&h);
            let got: f64 = {
                let mut s = 0.0;
                for i in 0..6 {
                    for j in (i + 1)..6 {
                        s += t.weighted[[i, j]];
                    }
                }
                s
            };
            let best = brute_force_msf_weight(&h);
            assert!(
                (got - best).abs() < 1e-12,
                "seed {seed}: kruskal {got} vs brute force {best}"
            );
        }
    }

    #[test]
    fn mst_weight_invariant_under_permutation() {
        let h = random_network(7, 0.8, 77);
        let t = max_spanning_tree(&h);
        let total: f64 = t.weighted.iter().sum();

        // relabel nodes by a fixed permutation and recompute
        let perm = [3usize, 0, 6, 1, 5, 2, 4];
        let mut w2 = DenseMatrix::zeros((7, 7));
        for i in 0..7 {
            for j in 0..7 {
                w2[[perm[i], perm[j]]] = h.weights()[[i, j]];
            }
        }
        let t2 = max_spanning_tree(&HorizontalNetwork::new(w2).unwrap());
        let total2: f64 = t2.weighted.iter().sum();
        assert!((total - total2).abs() < 1e-12);
    }

    #[test]
    fn mst_connected_has_n_minus_1_acyclic_edges() {
        for seed in 0..5 {
            let h = random_network(8, 1.0, 500 + seed);
            let t = max_spanning_tree(&h);
            assert_eq!(t.edge_count(), 7);
            assert_eq!(t.component_count(), 1);
            // acyclicity via union-find over mask edges
            let mut uf = UnionFind::new(8);
            for i in 0..8 {
                for j in (i + 1)..8 {
                    if t.mask[[i, j]] > 0.0 {
                        assert!(uf.union(i, j), "cycle at ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn mask_and_complement_partition_offdiagonal() {
        let h = random_network(6, 0.5, 9);
        let t = max_spanning_tree(&h);
        for i in 0..6 {
            for j in 0..6 {
                if i == j {
                    assert_eq!(t.mask[[i, j]] + t.complement[[i, j]], 0.0);
                } else {
                    assert_eq!(t.mask[[i, j]] + t.complement[[i, j]], 1.0);
                    assert_eq!(t.mask[[i, j]] * t.complement[[i, j]], 0.0);
                }
            }
        }
    }

    #[test]
    fn degree_sequence_cases() {
        let mut w = DenseMatrix::ones((4, 4));
        for i in 0..4 {
            w[[i, i]] = 0.0;
        }
        let h = network_from(w);
        assert_eq!(degree_sequence(&h), ndarray::arr1(&[3.0, 3.0, 3.0, 3.0]));

        let empty = network_from(DenseMatrix::zeros((3, 3)));
        assert_eq!(degree_sequence(&empty), ndarray::arr1(&[0.0, 0.0, 0.0]));

        let h = random_network(5, 0.8, 12);
        assert_eq!(degree_sequence(&h), matcore::row_sums(h.weights()));
    }

    #[test]
    fn tree_overlap_cases() {
        let h = random_network(10, 1.0, 13);
        let t = max_spanning_tree(&h);
        assert_eq!(tree_overlap(&t, &t).unwrap(), 9);

        // disjoint masks: path 0-1-2 vs path built on other pairs
        let ha = network_from(array![
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0]
        ]);
        let hb = network_from(array![
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0]
        ]);
        let ta = max_spanning_tree(&ha);
        let tb = max_spanning_tree(&hb);
        assert_eq!(tree_overlap(&ta, &tb).unwrap(), 0);

        // random pair equals hadamard-then-sum over the upper triangle
        let t1 = max_spanning_tree(&random_network(6, 0.9, 14));
        let t2 = max_spanning_tree(&random_network(6, 0.9, 15));
        let had = matcore::hadamard(&t1.mask, &t2.mask).unwrap();
        let mut oracle = 0;
        for i in 0..6 {
            for j in (i + 1)..6 {
                if had[[i, j]] > 0.0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(tree_overlap(&t1, &t2).unwrap(), oracle);

        let t3 = max_spanning_tree(&random_network(4, 1.0, 16));
        assert!(tree_overlap(&t1, &t3).is_err());
    }
}
