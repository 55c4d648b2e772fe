//! Homology over GF(2): boundary matrices, Betti numbers, and homological
//! connectivity.
//!
//! Betti numbers come from ranks of the boundary matrices,
//! `b_k = f_k - rank d_k - rank d_{k+1}`. The public `betti_gf2` first
//! shrinks the face set by elementary collapses (removing a free face
//! together with its unique proper coface preserves the homotopy type), then
//! eliminates; `betti_gf2_direct` skips the collapsing and is kept as an
//! independent oracle for tests.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::simplicial::Complex;

/// A dense bit matrix over GF(2), rows packed into 64-bit words.
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> BitMatrix {
        let words = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    /// Rank by forward row elimination (consumes the matrix).
    pub fn rank(mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            if pivot != rank {
                for w in 0..self.words {
                    self.data
                        .swap(rank * self.words + w, pivot * self.words + w);
                }
            }
            // Clear the column below the pivot; words left of the pivot
            // column are already zero in both rows.
            let from = col / 64;
            for r in rank + 1..self.rows {
                if self.get(r, col) {
                    let (head, tail) = self.data.split_at_mut(r * self.words);
                    let src = &head[rank * self.words + from..rank * self.words + self.words];
                    let dst = &mut tail[from..self.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// The GF(2) boundary matrices of a complex: `mats[k-1]` is d_k, with rows
/// indexed by the (k-1)-faces and columns by the k-faces, both in face-table
/// order.
pub struct BoundaryMatrices {
    pub mats: Vec<BitMatrix>,
}

pub fn boundary_matrices(complex: &Complex) -> BoundaryMatrices {
    BoundaryMatrices {
        mats: boundary_matrices_of(&collect_faces(complex)),
    }
}

/// Betti numbers of a complex, with the reduced variant alongside.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BettiProfile {
    /// `betti[k]` is the GF(2) Betti number in dimension k, for
    /// k = 0 ..= dim.
    pub betti: Vec<usize>,
    /// Reduced Betti numbers: one less in dimension 0 for nonempty
    /// complexes, identical elsewhere.
    pub reduced: Vec<usize>,
}

impl BettiProfile {
    fn from_betti(betti: Vec<usize>) -> BettiProfile {
        let mut reduced = betti.clone();
        if let Some(b0) = reduced.first_mut() {
            *b0 -= 1; // nonempty complexes are constructed with b_0 >= 1
        }
        BettiProfile { betti, reduced }
    }

    pub fn render(&self) -> String {
        format!(
            "({})",
            self.betti
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }

    /// Betti numbers with trailing zeros dropped: the homotopy-invariant
    /// core, comparable across complexes of different dimensions.
    pub fn trimmed(&self) -> Vec<usize> {
        let mut v = self.betti.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

/// Betti numbers with collapsing acceleration. Also asserts the
/// Euler-characteristic consistency of the result.
pub fn betti_gf2(complex: &Complex) -> BettiProfile {
    let faces = collapse_core(collect_faces(complex));
    profile(complex, betti_of_faces(&faces, complex.dimension()))
}

/// Betti numbers by straight elimination, no collapsing. Oracle for tests.
pub fn betti_gf2_direct(complex: &Complex) -> BettiProfile {
    let faces = collect_faces(complex);
    profile(complex, betti_of_faces(&faces, complex.dimension()))
}

fn profile(complex: &Complex, betti: Vec<usize>) -> BettiProfile {
    let alt: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    assert_eq!(
        alt,
        complex.euler_characteristic(),
        "Betti numbers of {} are inconsistent with its Euler characteristic",
        complex.name()
    );
    BettiProfile::from_betti(betti)
}

/// Largest k such that all reduced Betti numbers through dimension k vanish;
/// -1 when the complex is empty or disconnected. Capped at the dimension of
/// the complex when everything vanishes.
pub fn homological_connectivity(complex: &Complex) -> i32 {
    if complex.dimension() < 0 {
        return -1;
    }
    let profile = betti_gf2(complex);
    let mut conn: i32 = -1;
    for (k, &b) in profile.reduced.iter().enumerate() {
        if b != 0 {
            break;
        }
        conn = k as i32;
    }
    conn
}

fn collect_faces(complex: &Complex) -> Vec<Vec<u32>> {
    complex.faces().to_vec()
}

/// Remove free pairs until none remain. A face is free when it has exactly
/// one proper coface; since face sets are closed under subsets, that unique
/// coface is then automatically one dimension up and a facet, and removing
/// the pair is an elementary collapse.
fn collapse_core(faces: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut present: HashSet<Vec<u32>> = faces.iter().cloned().collect();
    let universe: Vec<u32> = {
        let mut vs: Vec<u32> = faces.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let mut queue: VecDeque<Vec<u32>> = faces.into_iter().collect();
    while let Some(face) = queue.pop_front() {
        if !present.contains(&face) {
            continue;
        }
        // Codimension-1 cofaces: insert one extra vertex.
        let mut unique_coface: Option<Vec<u32>> = None;
        let mut count = 0;
        for &v in &universe {
            if face.binary_search(&v).is_ok() {
                continue;
            }
            let mut candidate = Vec::with_capacity(face.len() + 1);
            let pos = face.partition_point(|&x| x < v);
            candidate.extend_from_slice(&face[..pos]);
            candidate.push(v);
            candidate.extend_from_slice(&face[pos..]);
            if present.contains(&candidate) {
                count += 1;
                if count > 1 {
                    break;
                }
                unique_coface = Some(candidate);
            }
        }
        if count != 1 {
            continue;
        }
        let coface = unique_coface.unwrap();
        present.remove(&face);
        present.remove(&coface);
        // Anything one dimension below either removed face may have become
        // free; re-enqueue those still present.
        for removed in [&face, &coface] {
            if removed.len() >= 2 {
                for skip in 0..removed.len() {
                    let sub: Vec<u32> = removed
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if present.contains(&sub) {
                        queue.push_back(sub);
                    }
                }
            }
        }
    }
    let mut rest: Vec<Vec<u32>> = present.into_iter().collect();
    rest.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    rest
}

/// Group faces by dimension and build each boundary matrix.
fn boundary_matrices_of(faces: &[Vec<u32>]) -> Vec<BitMatrix> {
    let max_len = faces.iter().map(|f| f.len()).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); max_len];
    for f in faces {
        by_dim[f.len() - 1].push(f);
    }
    let index: Vec<HashMap<&[u32], usize>> = by_dim
        .iter()
        .map(|fs| {
            fs.iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect()
        })
        .collect();
    let mut mats = Vec::new();
    for k in 1..max_len {
        // d_k: columns are the k-faces (length k+1), rows the (k-1)-faces.
        let mut m = BitMatrix::new(by_dim[k - 1].len(), by_dim[k].len());
        for (col, f) in by_dim[k].iter().enumerate() {
            for skip in 0..f.len() {
                let sub: Vec<u32> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let row = index[k - 1][sub.as_slice()];
                m.set(row, col);
            }
        }
        mats.push(m);
    }
    mats
}

/// Betti numbers of an arbitrary downward-closed face set, padded with
/// zeros up to `full_dim` (the collapsed core may have lower dimension than
/// the complex it came from).
fn betti_of_faces(faces: &[Vec<u32>], full_dim: i32) -> Vec<usize> {
    if full_dim < 0 {
        return Vec::new();
    }
    let mut f_counts = vec![0usize; full_dim as usize + 1];
    for f in faces {
        f_counts[f.len() - 1] += 1;
    }
    let mut ranks = vec![0usize; full_dim as usize + 2];
    for (k, m) in boundary_matrices_of(faces).into_iter().enumerate() {
        ranks[k + 1] = m.rank();
    }
    (0..=full_dim as usize)
        .map(|k| f_counts[k] - ranks[k] - ranks[k + 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeSet;
    use crate::simplicial::Label;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn u(v: usize) -> Label {
        Label::unsided(NodeSet::singleton(v))
    }

    fn from_vertex_facets(name: &str, facets: &[&[usize]]) -> Complex {
        let labels: Vec<Label> = facets
            .iter()
            .flat_map(|f| f.iter().map(|&v| u(v)))
            .collect();
        let facets: Vec<Vec<Label>> = facets
            .iter()
            .map(|f| f.iter().map(|&v| u(v)).collect())
            .collect();
        Complex::from_facets(name, labels, facets).unwrap()
    }

    #[test]
    fn bitmatrix_rank_small_cases() {
        let mut m = BitMatrix::new(2, 2);
        m.set(0, 0);
        m.set(1, 1);
        assert_eq!(m.rank(), 2);
        let mut m = BitMatrix::new(3, 3);
        for r in 0..3 {
            m.set(r, 0);
            m.set(r, 2);
        }
        assert_eq!(m.rank(), 1);
        assert_eq!(BitMatrix::new(0, 5).rank(), 0);
        assert_eq!(BitMatrix::new(5, 0).rank(), 0);
        // A column index past the first word exercises the packing.
        let mut m = BitMatrix::new(2, 130);
        m.set(0, 129);
        m.set(1, 129);
        m.set(1, 0);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn bitmatrix_rank_matches_naive_elimination() {
        // Independent naive rank over Vec<Vec<bool>>.
        fn naive_rank(mut a: Vec<Vec<bool>>) -> usize {
            let rows = a.len();
            let cols = if rows == 0 { 0 } else { a[0].len() };
            let mut rank = 0;
            for c in 0..cols {
                let Some(p) = (rank..rows).find(|&r| a[r][c]) else {
                    continue;
                };
                a.swap(rank, p);
                for r in 0..rows {
                    if r != rank && a[r][c] {
                        let pivot_row = a[rank].clone();
                        for (x, y) in a[r].iter_mut().zip(pivot_row) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
                if rank == rows {
                    break;
                }
            }
            rank
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..50 {
            let rows = rng.gen_range(1..20);
            let cols = rng.gen_range(1..90);
            let mut m = BitMatrix::new(rows, cols);
            let mut naive = vec![vec![false; cols]; rows];
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.3) {
                        m.set(r, c);
                        naive[r][c] = true;
                    }
                }
            }
            assert_eq!(m.rank(), naive_rank(naive), "trial {trial}");
        }
    }

    #[test]
    fn boundary_of_boundary_is_zero() {
        let c = from_vertex_facets("c", &[&[0, 1, 2, 3], &[3, 4, 5], &[5, 6]]);
        let mats = boundary_matrices(&c);
        for pair in mats.mats.windows(2) {
            let (d_k, d_k1) = (&pair[0], &pair[1]);
            // (d_k ∘ d_{k+1}) column by column: every column of the product
            // must vanish.
            for col in 0..d_k1.cols() {
                let mut acc = vec![false; d_k.rows()];
                for mid in 0..d_k1.rows() {
                    if d_k1.get(mid, col) {
                        for (r, a) in acc.iter_mut().enumerate() {
                            *a ^= d_k.get(r, mid);
                        }
                    }
                }
                assert!(acc.iter().all(|&x| !x));
            }
        }
    }

    #[test]
    fn betti_of_reference_spaces() {
        // Solid tetrahedron: contractible.
        let solid = from_vertex_facets("solid", &[&[0, 1, 2, 3]]);
        assert_eq!(betti_gf2(&solid).betti, vec![1, 0, 0, 0]);
        // Its boundary: a 2-sphere.
        let sphere =
            from_vertex_facets("sphere", &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(betti_gf2(&sphere).betti, vec![1, 0, 1]);
        // A hexagon: a circle.
        let hexagon = from_vertex_facets(
            "hex",
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]],
        );
        assert_eq!(betti_gf2(&hexagon).betti, vec![1, 1]);
        assert_eq!(betti_gf2(&hexagon).reduced, vec![0, 1]);
        // Two disjoint edges.
        let two = from_vertex_facets("two", &[&[0, 1], &[2, 3]]);
        assert_eq!(betti_gf2(&two).betti, vec![2, 0]);
        // Wedge-like union of a triangle boundary and a pendant edge.
        let wedge = from_vertex_facets("wedge", &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        assert_eq!(betti_gf2(&wedge).betti, vec![1, 1]);
        // Empty complex.
        assert!(betti_gf2(&Complex::empty("e")).betti.is_empty());
    }

    #[test]
    fn projective_plane_mod_two() {
        // Minimal 6-vertex triangulation of the projective plane; over
        // GF(2) its Betti numbers are (1, 1, 1).
        let rp2 = from_vertex_facets(
            "rp2",
            &[
                &[0, 1, 2],
                &[0, 1, 3],
                &[0, 2, 4],
                &[0, 3, 5],
                &[0, 4, 5],
                &[1, 2, 5],
                &[1, 3, 4],
                &[1, 4, 5],
                &[2, 3, 4],
                &[2, 3, 5],
            ],
        );
        // Confirm the facet list really is a closed surface with Euler
        // characteristic 1 (which pins the homeomorphism type).
        assert_eq!(rp2.f_vector(), vec![6, 15, 10]);
        assert_eq!(rp2.euler_characteristic(), 1);
        let mut edge_count: HashMap<Vec<u32>, usize> = HashMap::new();
        for t in rp2.faces_of_dim(2) {
            for skip in 0..3 {
                let e: Vec<u32> = t
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *edge_count.entry(e).or_insert(0) += 1;
            }
        }
        assert!(edge_count.values().all(|&c| c == 2));
        assert_eq!(betti_gf2(&rp2).betti, vec![1, 1, 1]);
        assert_eq!(betti_gf2_direct(&rp2).betti, vec![1, 1, 1]);
        assert_eq!(homological_connectivity(&rp2), 0);
    }

    #[test]
    fn collapsing_agrees_with_direct_elimination() {
        let cases = vec![
            from_vertex_facets("solid", &[&[0, 1, 2, 3]]),
            from_vertex_facets("sphere", &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
            from_vertex_facets(
                "hex",
                &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]],
            ),
            from_vertex_facets("wedge", &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]),
            from_vertex_facets("two", &[&[0, 1], &[2, 3]]),
        ];
        for c in cases {
            assert_eq!(betti_gf2(&c), betti_gf2_direct(&c), "on {}", c.name());
        }
        // Random complexes: facets drawn from a small vertex pool.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..30 {
            let n_facets = rng.gen_range(1..8);
            let facets: Vec<Vec<usize>> = (0..n_facets)
                .map(|_| {
                    let size = rng.gen_range(1..5);
                    (0..size).map(|_| rng.gen_range(0..8)).collect()
                })
                .collect();
            let refs: Vec<&[usize]> = facets.iter().map(|f| f.as_slice()).collect();
            let c = from_vertex_facets("rand", &refs);
            assert_eq!(betti_gf2(&c), betti_gf2_direct(&c), "trial {trial}");
        }
    }

    #[test]
    fn collapse_core_shrinks_contractible_spaces_to_a_point() {
        let solid = from_vertex_facets("solid", &[&[0, 1, 2, 3]]);
        let core = collapse_core(solid.faces().to_vec());
        assert_eq!(core.len(), 1);
        assert_eq!(core[0].len(), 1);
        // A sphere has no free faces at all: the core is the whole thing.
        let sphere =
            from_vertex_facets("sphere", &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let core = collapse_core(sphere.faces().to_vec());
        assert_eq!(core.len(), sphere.faces().len());
    }

    #[test]
    fn connectivity_values() {
        assert_eq!(homological_connectivity(&Complex::empty("e")), -1);
        let two_points = from_vertex_facets("pp", &[&[0], &[1]]);
        assert_eq!(homological_connectivity(&two_points), -1);
        let hexagon = from_vertex_facets(
            "hex",
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]],
        );
        assert_eq!(homological_connectivity(&hexagon), 0);
        let solid = from_vertex_facets("solid", &[&[0, 1, 2, 3]]);
        assert_eq!(homological_connectivity(&solid), 3); // capped at dim
        let sphere =
            from_vertex_facets("sphere", &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(homological_connectivity(&sphere), 1);
    }
}
