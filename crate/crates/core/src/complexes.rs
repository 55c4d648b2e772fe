//! The complexes a graph gives rise to, and the certified maps between
//! them.
//!
//! For a connected graph G with common-neighborhood operator CN:
//!
//! * `neighborhood_complex`: faces are the sets of nodes with a common
//!   neighbor; facets are the maximal neighborhoods.
//! * `ClosedSetPoset`: the sets A with CN(A) nonempty and CN(CN(A)) = A,
//!   ordered by inclusion. CN restricts to an inclusion-reversing
//!   involution of this poset.
//! * `lovasz_complex`: the order complex of the closed-set poset, with the
//!   involution A -> CN(A).
//! * `box_complex`: vertices are two shores of node labels; the facets are
//!   A ⊎ CN(A) over closed A. The involution swaps shores.
//! * `ssd_box`: the shore subdivision of the box complex.
//! * `scn2_map`: the shore-wise CN² retraction of the subdivided box
//!   complex; `doubled_lovasz` is its image, also built directly from
//!   chain pairs as a permanent cross-check.
//! * `jump_map`: pairs up the doubled-complex vertices ((S, A) with
//!   (flip S, CN A)) and folds each pair onto its member whose payload is
//!   `precedes`-smaller; `halved_doubled_lovasz` is its image.
//! * `lovasz_to_hdl_iso`: the certified simplicial isomorphism from the
//!   Lovász complex onto the halved doubled complex.
//! * `collapse_sequence`: the step-by-step equivariant collapse from the
//!   doubled complex down to the halved one, with every intermediate
//!   certificate re-checked.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeSet};
use crate::simplicial::{Complex, Label, Shore, SimplicialError, VertexMap, Z2Complex};

/// Cap on the number of closed sets a poset may hold.
pub const MAX_CLOSED_SETS: usize = 2048;

/// Cap on enumerated chains (order-complex facets, flag families).
pub const MAX_CHAINS: usize = 1 << 20;

/// Node counts up to this use the exhaustive closed-set scan; larger graphs
/// use the intersection-semilattice construction.
const CLOSED_BRUTE_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("closed-set family of {name} exceeds the cap of {cap} members")]
    TooManyClosedSets { name: String, cap: usize },
    #[error("{what} needs more than {cap} chains")]
    ChainBudget { what: String, cap: usize },
    #[error("doubled-complex constructions disagree on {witness}")]
    DoubledMismatch { witness: String },
    #[error("{what} certificate failed for {name}: {detail}")]
    Certificate {
        what: &'static str,
        name: String,
        detail: String,
    },
    #[error(
        "collapse step {step} (removing {x}): facet {facet} contains {present} but not {missing}"
    )]
    CollapseMaximality {
        step: usize,
        x: NodeSet,
        facet: String,
        present: Label,
        missing: Label,
    },
    #[error("collapse did not terminate at the halved complex: {detail}")]
    CollapseTerminal { detail: String },
}

fn cert(
    what: &'static str,
    name: impl Into<String>,
) -> impl FnOnce(SimplicialError) -> ComplexError {
    let name = name.into();
    move |e| ComplexError::Certificate {
        what,
        name,
        detail: e.to_string(),
    }
}

/// The canonical linear order on node sets: cardinality first, then
/// lexicographic on ascending member lists. Every tie-break in the jump and
/// collapse machinery uses this order.
pub fn precedes(a: NodeSet, b: NodeSet) -> bool {
    a < b
}

/// The poset of closed sets: nonempty A with CN(A) nonempty and
/// CN(CN(A)) = A, ordered by inclusion and sorted by `precedes`.
/// Construction verifies that CN is an inclusion-reversing involution of
/// the family.
pub struct ClosedSetPoset {
    sets: Vec<NodeSet>,
    cn: Vec<usize>,
    /// Covers-below: `children[i]` lists the maximal closed proper subsets
    /// of `sets[i]`.
    children: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
}

impl ClosedSetPoset {
    pub fn build(g: &Graph) -> Result<ClosedSetPoset, ComplexError> {
        let family = if g.n() <= CLOSED_BRUTE_LIMIT {
            closed_sets_exhaustive(g)
        } else {
            closed_sets_semilattice(g)
        };
        if family.len() > MAX_CLOSED_SETS {
            return Err(ComplexError::TooManyClosedSets {
                name: g.name().to_string(),
                cap: MAX_CLOSED_SETS,
            });
        }
        let mut sets: Vec<NodeSet> = family.into_iter().collect();
        sets.sort_unstable();
        let index: HashMap<u64, usize> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.mask(), i))
            .collect();
        let fail = |detail: String| ComplexError::Certificate {
            what: "closed-set poset",
            name: g.name().to_string(),
            detail,
        };
        let mut cn = Vec::with_capacity(sets.len());
        for &a in &sets {
            let c = g.common_neighborhood(a);
            let Some(&j) = index.get(&c.mask()) else {
                return Err(fail(format!("CN({a}) = {c} is not closed")));
            };
            cn.push(j);
        }
        for (i, &j) in cn.iter().enumerate() {
            if cn[j] != i {
                return Err(fail(format!("CN is not an involution at {}", sets[i])));
            }
        }
        // Antitone on comparable pairs.
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i != j && sets[i].is_subset_of(sets[j]) && !sets[cn[j]].is_subset_of(sets[cn[i]])
                {
                    return Err(fail(format!(
                        "CN is not inclusion-reversing on {} and {}",
                        sets[i], sets[j]
                    )));
                }
            }
        }
        // Covers: j is a child of i when sets[j] is a maximal closed proper
        // subset of sets[i].
        let mut children = vec![Vec::new(); sets.len()];
        for i in 0..sets.len() {
            let subs: Vec<usize> = (0..sets.len())
                .filter(|&j| j != i && sets[j].is_subset_of(sets[i]))
                .collect();
            children[i] = subs
                .iter()
                .copied()
                .filter(|&j| {
                    !subs
                        .iter()
                        .any(|&k| k != j && sets[j].is_subset_of(sets[k]))
                })
                .collect();
        }
        Ok(ClosedSetPoset {
            sets,
            cn,
            children,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// All closed sets, ascending in the `precedes` order.
    pub fn sets(&self) -> &[NodeSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> NodeSet {
        self.sets[i]
    }

    pub fn index_of(&self, s: NodeSet) -> Option<usize> {
        self.index.get(&s.mask()).copied()
    }

    pub fn cn_index(&self, i: usize) -> usize {
        self.cn[i]
    }

    /// CN of a closed set, staying inside the poset.
    pub fn cn_set(&self, s: NodeSet) -> Option<NodeSet> {
        self.index_of(s).map(|i| self.sets[self.cn[i]])
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Does the closed set jump under the fold? True when CN(A) precedes A.
    pub fn jumps(&self, i: usize) -> bool {
        self.sets[self.cn[i]] < self.sets[i]
    }

    /// For every element, the maximal chains of its down-set (each ends at
    /// that element). Shared bottom-up computation; errors past `cap`
    /// chains in total.
    fn flags_to_all(&self, cap: usize, what: &str) -> Result<Vec<Vec<Vec<usize>>>, ComplexError> {
        let mut flags: Vec<Vec<Vec<usize>>> = Vec::with_capacity(self.sets.len());
        let mut total = 0usize;
        // `children` only point to smaller cardinalities, hence to smaller
        // indices in the `precedes`-sorted order.
        for i in 0..self.sets.len() {
            let mine: Vec<Vec<usize>> = if self.children[i].is_empty() {
                vec![vec![i]]
            } else {
                self.children[i]
                    .iter()
                    .flat_map(|&c| {
                        flags[c].iter().map(move |chain| {
                            let mut ext = chain.clone();
                            ext.push(i);
                            ext
                        })
                    })
                    .collect()
            };
            total += mine.len();
            if total > cap {
                return Err(ComplexError::ChainBudget {
                    what: what.to_string(),
                    cap,
                });
            }
            flags.push(mine);
        }
        Ok(flags)
    }

    /// The maximal chains of the whole poset.
    pub fn maximal_chains(&self) -> Result<Vec<Vec<usize>>, ComplexError> {
        let flags = self.flags_to_all(MAX_CHAINS, "maximal chains of the closed-set poset")?;
        let mut has_parent = vec![false; self.sets.len()];
        for kids in &self.children {
            for &k in kids {
                has_parent[k] = true;
            }
        }
        Ok(flags
            .into_iter()
            .zip(&has_parent)
            .filter(|(_, &hp)| !hp)
            .flat_map(|(f, _)| f)
            .collect())
    }
}

/// Exhaustive closed-set scan over all nonempty subsets.
fn closed_sets_exhaustive(g: &Graph) -> Vec<NodeSet> {
    let mut out = Vec::new();
    for mask in 1..1u64 << g.n() {
        let a = NodeSet::from_mask(mask);
        let c = g.common_neighborhood(a);
        if !c.is_empty() && g.common_neighborhood(c) == a {
            out.push(a);
        }
    }
    out
}

/// Closed sets as the nonempty members of the intersection semilattice
/// generated by the neighborhoods: every closed set is CN of a nonempty
/// set, i.e. a nonempty intersection of neighborhoods, and conversely.
fn closed_sets_semilattice(g: &Graph) -> Vec<NodeSet> {
    let mut family: HashSet<u64> = (0..g.n()).map(|v| g.neighbors(v).mask()).collect();
    family.remove(&0);
    let mut work: Vec<u64> = family.iter().copied().collect();
    while let Some(a) = work.pop() {
        let snapshot: Vec<u64> = family.iter().copied().collect();
        for b in snapshot {
            let c = a & b;
            if c != 0 && family.insert(c) {
                work.push(c);
            }
        }
        if family.len() > MAX_CLOSED_SETS {
            break; // the cap check in `build` reports it
        }
    }
    family.into_iter().map(NodeSet::from_mask).collect()
}

/// The neighborhood complex: one vertex per node, one facet per maximal
/// neighborhood.
pub fn neighborhood_complex(g: &Graph) -> Result<Complex, ComplexError> {
    let labels: Vec<Label> = (0..g.n())
        .map(|v| Label::unsided(NodeSet::singleton(v)))
        .collect();
    let mut nbhds: Vec<NodeSet> = (0..g.n()).map(|v| g.neighbors(v)).collect();
    nbhds.sort_unstable();
    nbhds.dedup();
    let facets: Vec<Vec<Label>> = nbhds
        .iter()
        .map(|nb| {
            nb.iter()
                .map(|v| Label::unsided(NodeSet::singleton(v)))
                .collect()
        })
        .collect();
    Ok(Complex::from_facets(
        format!("N({})", g.name()),
        labels,
        facets,
    )?)
}

/// The order complex of the closed-set poset, carrying the involution
/// A -> CN(A).
pub fn lovasz_complex(g: &Graph, poset: &ClosedSetPoset) -> Result<Z2Complex, ComplexError> {
    let name = format!("L({})", g.name());
    let labels: Vec<Label> = poset.sets().iter().map(|&s| Label::unsided(s)).collect();
    let facets: Vec<Vec<Label>> = poset
        .maximal_chains()?
        .into_iter()
        .map(|chain| {
            chain
                .into_iter()
                .map(|i| Label::unsided(poset.set(i)))
                .collect()
        })
        .collect();
    let complex = Arc::new(Complex::from_facets(name.clone(), labels, facets)?);
    Z2Complex::new(complex, |l| {
        Label::unsided(poset.cn_set(l.payload).expect("vertices are closed sets"))
    })
    .map_err(cert("involution", name))
}

/// The box complex: left and right copies of the nodes; the facets are
/// A ⊎ CN(A) over closed A; the involution swaps shores.
pub fn box_complex(g: &Graph, poset: &ClosedSetPoset) -> Result<Z2Complex, ComplexError> {
    let name = format!("B({})", g.name());
    let mut labels = Vec::with_capacity(2 * g.n());
    for v in 0..g.n() {
        labels.push(Label::left(NodeSet::singleton(v)));
        labels.push(Label::right(NodeSet::singleton(v)));
    }
    let facets: Vec<Vec<Label>> = (0..poset.len())
        .map(|i| {
            let a = poset.set(i);
            let b = poset.set(poset.cn_index(i));
            a.iter()
                .map(|v| Label::left(NodeSet::singleton(v)))
                .chain(b.iter().map(|v| Label::right(NodeSet::singleton(v))))
                .collect()
        })
        .collect();
    let complex = Arc::new(Complex::from_facets(name.clone(), labels, facets)?);
    Z2Complex::new(complex, Label::flipped).map_err(cert("involution", name))
}

/// The shore subdivision of the box complex: each shore of each face is
/// barycentrically subdivided, new vertices labeled by the union of the
/// node payloads they stand for. The shore swap remains the involution.
pub fn ssd_box(g: &Graph, box_z2: &Z2Complex) -> Result<Z2Complex, ComplexError> {
    let name = format!("ssd(B({}))", g.name());
    let left: HashSet<Label> = box_z2
        .labels()
        .iter()
        .copied()
        .filter(|l| l.shore == Shore::Left)
        .collect();
    let right: HashSet<Label> = box_z2
        .labels()
        .iter()
        .copied()
        .filter(|l| l.shore == Shore::Right)
        .collect();
    let complex = Arc::new(box_z2.shore_subdivision(name.clone(), &left, &right)?);
    Z2Complex::new(complex, Label::flipped).map_err(cert("involution", name))
}

/// The shore-wise CN² retraction of the subdivided box complex; certified
/// simplicial, equivariant, and idempotent.
pub fn scn2_map(g: &Graph, ssd: &Z2Complex) -> Result<VertexMap, ComplexError> {
    let name = format!("sCN²({})", g.name());
    let map = VertexMap::from_fn(ssd.complex().clone(), ssd.complex().clone(), |l| {
        let closure = g.common_neighborhood(g.common_neighborhood(l.payload));
        Label::new(l.shore, closure)
    })
    .map_err(cert("retraction", name.clone()))?;
    map.check_simplicial()
        .map_err(cert("retraction", name.clone()))?;
    map.check_equivariant(ssd, ssd)
        .map_err(cert("retraction", name.clone()))?;
    if !map.is_idempotent() {
        return Err(ComplexError::Certificate {
            what: "retraction",
            name,
            detail: "the map is not idempotent".to_string(),
        });
    }
    Ok(map)
}

/// The doubled complex: the image of the subdivided box complex under the
/// CN² retraction. It is also built directly — facets are the pairs
/// (maximal chain up to A, maximal chain up to CN(A)) over closed A — and
/// the two constructions must agree face for face.
pub fn doubled_lovasz(
    g: &Graph,
    poset: &ClosedSetPoset,
    scn2: &VertexMap,
) -> Result<Z2Complex, ComplexError> {
    let name = format!("dL({})", g.name());
    let image = scn2.image_complex(name.clone())?;
    let direct = direct_doubled(&name, poset)?;
    if image != direct {
        let witness = image
            .facet_labels()
            .find(|f| !direct.contains_face(f))
            .or_else(|| direct.facet_labels().find(|f| !image.contains_face(f)))
            .map(|f| {
                f.iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_else(|| "equal face sets with different labels".to_string());
        return Err(ComplexError::DoubledMismatch { witness });
    }
    Z2Complex::new(Arc::new(image), Label::flipped).map_err(cert("involution", name))
}

fn direct_doubled(name: &str, poset: &ClosedSetPoset) -> Result<Complex, ComplexError> {
    let mut labels = Vec::with_capacity(2 * poset.len());
    for &s in poset.sets() {
        labels.push(Label::left(s));
        labels.push(Label::right(s));
    }
    let flags = poset.flags_to_all(MAX_CHAINS, "doubled-complex flags")?;
    let mut facets: Vec<Vec<Label>> = Vec::new();
    for i in 0..poset.len() {
        let j = poset.cn_index(i);
        for fa in &flags[i] {
            for fb in &flags[j] {
                if facets.len() >= MAX_CHAINS {
                    return Err(ComplexError::ChainBudget {
                        what: "doubled-complex facets".to_string(),
                        cap: MAX_CHAINS,
                    });
                }
                facets.push(
                    fa.iter()
                        .map(|&k| Label::left(poset.set(k)))
                        .chain(fb.iter().map(|&k| Label::right(poset.set(k))))
                        .collect(),
                );
            }
        }
    }
    Ok(Complex::from_facets(name, labels, facets)?)
}

/// The vertex pairing behind the jump map: every doubled-complex vertex
/// (S, A) is partnered with (flip S, CN A); exactly one member of each pair
/// is stationary (its payload `precedes` its CN).
#[derive(Debug, Clone)]
pub struct JumpPartition {
    /// One entry per pair: (stationary vertex, jumping vertex).
    pub pairs: Vec<(Label, Label)>,
}

impl JumpPartition {
    pub fn stationary(&self) -> impl Iterator<Item = Label> + '_ {
        self.pairs.iter().map(|&(s, _)| s)
    }

    pub fn jumping(&self) -> impl Iterator<Item = Label> + '_ {
        self.pairs.iter().map(|&(_, j)| j)
    }
}

/// Pair up the doubled-complex vertices and validate the partition: the
/// partner involution is label-respecting, every vertex lands in exactly
/// one pair, and each pair holds one stationary and one jumping member.
pub fn jump_partition(
    poset: &ClosedSetPoset,
    dl: &Z2Complex,
) -> Result<JumpPartition, ComplexError> {
    let fail = |detail: String| ComplexError::Certificate {
        what: "jump partition",
        name: dl.name().to_string(),
        detail,
    };
    let mut pairs = Vec::new();
    let mut seen: HashSet<Label> = HashSet::new();
    for &l in dl.labels() {
        let Some(i) = poset.index_of(l.payload) else {
            return Err(fail(format!("vertex {l} has a payload that is not closed")));
        };
        let partner = Label::new(l.shore.flipped(), poset.set(poset.cn_index(i)));
        if dl.label_id(partner).is_none() {
            return Err(fail(format!("{l} has no partner vertex {partner}")));
        }
        let stationary_l = !poset.jumps(i);
        let stationary_p = poset.jumps(i); // partner payload is CN(A)
        if stationary_l == stationary_p {
            return Err(fail(format!(
                "pair {{{l}, {partner}}} does not split into one stationary and one jumping member"
            )));
        }
        if seen.contains(&l) {
            continue; // pair already recorded from the partner
        }
        seen.insert(l);
        seen.insert(partner);
        if stationary_l {
            pairs.push((l, partner));
        } else {
            pairs.push((partner, l));
        }
    }
    if seen.len() != dl.vertex_count() {
        return Err(fail("pairing does not cover the vertex set".to_string()));
    }
    Ok(JumpPartition { pairs })
}

/// The jump map: each stationary vertex stays put, each jumping vertex
/// (S, A) moves to (flip S, CN A). Certified simplicial, equivariant,
/// idempotent, and exactly halving on vertices.
pub fn jump_map(poset: &ClosedSetPoset, dl: &Z2Complex) -> Result<VertexMap, ComplexError> {
    let name = format!("j on {}", dl.name());
    for &l in dl.labels() {
        if poset.index_of(l.payload).is_none() {
            return Err(ComplexError::Certificate {
                what: "jump",
                name,
                detail: format!("vertex {l} has a payload that is not closed"),
            });
        }
    }
    let map = VertexMap::from_fn(dl.complex().clone(), dl.complex().clone(), |l| {
        let i = poset.index_of(l.payload).expect("payloads checked closed");
        if poset.jumps(i) {
            Label::new(l.shore.flipped(), poset.set(poset.cn_index(i)))
        } else {
            l
        }
    })
    .map_err(cert("jump", name.clone()))?;
    map.check_simplicial().map_err(cert("jump", name.clone()))?;
    map.check_equivariant(dl, dl)
        .map_err(cert("jump", name.clone()))?;
    if !map.is_idempotent() {
        return Err(ComplexError::Certificate {
            what: "jump",
            name,
            detail: "the fold is not idempotent".to_string(),
        });
    }
    let distinct: HashSet<u32> = dl
        .labels()
        .iter()
        .enumerate()
        .map(|(i, _)| map.apply_vertex(i as u32))
        .collect();
    if distinct.len() * 2 != dl.vertex_count() {
        return Err(ComplexError::Certificate {
            what: "jump",
            name,
            detail: format!(
                "image has {} vertices, expected half of {}",
                distinct.len(),
                dl.vertex_count()
            ),
        });
    }
    Ok(map)
}

/// The halved doubled complex: the image of the jump map, carrying the
/// shore swap as its involution.
pub fn halved_doubled_lovasz(g: &Graph, jump: &VertexMap) -> Result<Z2Complex, ComplexError> {
    let name = format!("hdL({})", g.name());
    let image = Arc::new(jump.image_complex(name.clone())?);
    Z2Complex::new(image, Label::flipped).map_err(cert("involution", name))
}

/// The composite retraction from the subdivided box complex onto the halved
/// doubled complex: CN² shore-wise, then the jump fold. Its image must be
/// exactly the halved complex.
pub fn phi_map(
    scn2: &VertexMap,
    jump: &VertexMap,
    ssd: &Z2Complex,
    dl: &Z2Complex,
    hdl: &Z2Complex,
) -> Result<VertexMap, ComplexError> {
    let name = format!("phi on {}", ssd.name());
    let phi = scn2
        .compose(jump)
        .map_err(cert("composite", name.clone()))?;
    phi.check_simplicial()
        .map_err(cert("composite", name.clone()))?;
    phi.check_equivariant(ssd, dl)
        .map_err(cert("composite", name.clone()))?;
    let image = phi.image_complex(format!("im({name})"))?;
    if &image != hdl.complex().as_ref() {
        return Err(ComplexError::Certificate {
            what: "composite",
            name,
            detail: format!(
                "image f-vector {:?} differs from the halved complex {:?}",
                image.f_vector(),
                hdl.f_vector()
            ),
        });
    }
    Ok(phi)
}

/// The certified isomorphism from the Lovász complex onto the halved
/// doubled complex: a closed set A goes to (L, A) when A precedes CN(A),
/// otherwise to (R, CN A). Certifies bijectivity, simpliciality both ways,
/// and equivariance.
pub fn lovasz_to_hdl_iso(
    poset: &ClosedSetPoset,
    lovasz: &Z2Complex,
    hdl: &Z2Complex,
) -> Result<VertexMap, ComplexError> {
    let name = format!("{} ≅ {}", lovasz.name(), hdl.name());
    let map = VertexMap::from_fn(lovasz.complex().clone(), hdl.complex().clone(), |l| {
        let i = poset
            .index_of(l.payload)
            .expect("Lovász vertices are closed sets");
        if poset.jumps(i) {
            Label::right(poset.set(poset.cn_index(i)))
        } else {
            Label::left(l.payload)
        }
    })
    .map_err(cert("isomorphism", name.clone()))?;
    map.certify_isomorphism()
        .map_err(cert("isomorphism", name.clone()))?;
    map.check_equivariant(lovasz, hdl)
        .map_err(cert("isomorphism", name))?;
    Ok(map)
}

/// One step of the collapse: the doubled subcomplex it acts on, the payload
/// removed, and the certified fold onto the next subcomplex.
pub struct CollapseStep {
    pub index: usize,
    /// The closed set whose two vertices this step removes.
    pub x: NodeSet,
    pub source: Z2Complex,
    /// The fold from `source` onto the next subcomplex: (S, x) -> (flip S,
    /// CN x), identity elsewhere.
    pub map: VertexMap,
}

/// The full collapse from the doubled complex to the halved one.
pub struct CollapseSequence {
    pub steps: Vec<CollapseStep>,
    pub terminal: Z2Complex,
}

impl CollapseSequence {
    /// Every complex along the way: each step's source, then the terminal.
    pub fn complexes(&self) -> impl Iterator<Item = &Z2Complex> {
        self.steps
            .iter()
            .map(|s| &s.source)
            .chain(std::iter::once(&self.terminal))
    }
}

/// Collapse the doubled complex onto the halved one, two vertices at a
/// time: repeatedly take the `precedes`-greatest jumping payload X still
/// present, certify that every facet through one of its vertices also
/// contains the folded image of that vertex, and fold (L,X) and (R,X)
/// away. Checks along the way: each fold is simplicial and equivariant,
/// each stage is a strictly smaller invariant subcomplex, the composite of
/// all folds is exactly the jump map, and the final stage equals the halved
/// complex.
pub fn collapse_sequence(
    g: &Graph,
    poset: &ClosedSetPoset,
    dl: &Z2Complex,
    jump: &VertexMap,
    hdl: &Z2Complex,
) -> Result<CollapseSequence, ComplexError> {
    // Jumping payloads, descending in the precedes order.
    let mut jumping: Vec<NodeSet> = (0..poset.len())
        .filter(|&i| poset.jumps(i))
        .map(|i| poset.set(i))
        .collect();
    jumping.sort_unstable_by(|a, b| b.cmp(a));
    let mut current = dl.clone();
    let mut steps: Vec<CollapseStep> = Vec::new();
    for &x in &jumping {
        let step = steps.len();
        let lx = Label::left(x);
        let rx = Label::right(x);
        if current.label_id(lx).is_none() && current.label_id(rx).is_none() {
            return Err(ComplexError::CollapseTerminal {
                detail: format!("jumping payload {x} disappeared before its step"),
            });
        }
        let cnx = poset.cn_set(x).expect("closed");
        // Maximality certificate: a facet through (S, x) must contain
        // (flip S, CN x), else folding that facet would leave the complex.
        for facet in current.facets() {
            for (present, missing) in [(lx, Label::right(cnx)), (rx, Label::left(cnx))] {
                let has_present = current
                    .label_id(present)
                    .is_some_and(|id| facet.binary_search(&id).is_ok());
                let has_missing = current
                    .label_id(missing)
                    .is_some_and(|id| facet.binary_search(&id).is_ok());
                if has_present && !has_missing {
                    return Err(ComplexError::CollapseMaximality {
                        step,
                        x,
                        facet: current.render_face(facet),
                        present,
                        missing,
                    });
                }
            }
        }
        let keep: HashSet<Label> = current
            .labels()
            .iter()
            .copied()
            .filter(|&l| l != lx && l != rx)
            .collect();
        let next = Arc::new(
            current
                .complex()
                .induced_subcomplex(format!("S{}({})", step + 1, g.name()), &keep)?,
        );
        if next.vertex_count() + 2 != current.vertex_count() {
            return Err(ComplexError::CollapseTerminal {
                detail: format!(
                    "step {step} removed {} vertices instead of 2",
                    current.vertex_count() - next.vertex_count()
                ),
            });
        }
        let next_z2 = Z2Complex::new(next.clone(), Label::flipped).map_err(cert(
            "collapse stage",
            format!("S{}({})", step + 1, g.name()),
        ))?;
        let map = VertexMap::from_fn(current.complex().clone(), next.clone(), |l| {
            if l.payload == x {
                Label::new(l.shore.flipped(), cnx)
            } else {
                l
            }
        })
        .map_err(cert("collapse fold", format!("step {step}")))?;
        map.check_simplicial()
            .map_err(cert("collapse fold", format!("step {step}")))?;
        map.check_equivariant(&current, &next_z2)
            .map_err(cert("collapse fold", format!("step {step}")))?;
        steps.push(CollapseStep {
            index: step,
            x,
            source: current.clone(),
            map,
        });
        current = next_z2;
    }
    if current.complex().as_ref() != hdl.complex().as_ref() {
        return Err(ComplexError::CollapseTerminal {
            detail: format!(
                "final stage f-vector {:?} differs from the halved complex {:?}",
                current.f_vector(),
                hdl.f_vector()
            ),
        });
    }
    // The composite of all folds must be the jump map, vertex for vertex.
    let composed = match steps.split_first() {
        None => VertexMap::identity(dl.complex().clone()),
        Some((first, rest)) => {
            let mut acc = first.map.clone();
            for s in rest {
                acc = acc
                    .compose(&s.map)
                    .map_err(cert("collapse composite", dl.name().to_string()))?;
            }
            acc
        }
    };
    for &l in dl.labels() {
        let via_steps = composed.apply_label(l).expect("total");
        let via_jump = jump.apply_label(l).expect("total");
        if via_steps != via_jump {
            return Err(ComplexError::CollapseTerminal {
                detail: format!(
                    "composite sends {l} to {via_steps}, the jump map sends it to {via_jump}"
                ),
            });
        }
    }
    Ok(CollapseSequence {
        steps,
        terminal: current,
    })
}

/// Everything the library can build for one graph, constructed in
/// dependency order with all certificates checked. The collapse sequence is
/// the one expensive piece left out; call `collapse` for it.
pub struct GraphComplexes {
    pub graph: Graph,
    pub poset: ClosedSetPoset,
    pub neighborhood: Complex,
    pub lovasz: Z2Complex,
    pub box_z2: Z2Complex,
    pub ssd: Z2Complex,
    pub scn2: VertexMap,
    pub dl: Z2Complex,
    pub partition: JumpPartition,
    pub jump: VertexMap,
    pub hdl: Z2Complex,
    pub phi: VertexMap,
    pub iso: VertexMap,
}

impl GraphComplexes {
    pub fn build(graph: Graph) -> Result<GraphComplexes, ComplexError> {
        graph.validate()?;
        let poset = ClosedSetPoset::build(&graph)?;
        let neighborhood = neighborhood_complex(&graph)?;
        let lovasz = lovasz_complex(&graph, &poset)?;
        let box_z2 = box_complex(&graph, &poset)?;
        let ssd = ssd_box(&graph, &box_z2)?;
        let scn2 = scn2_map(&graph, &ssd)?;
        let dl = doubled_lovasz(&graph, &poset, &scn2)?;
        let partition = jump_partition(&poset, &dl)?;
        let jump = jump_map(&poset, &dl)?;
        let hdl = halved_doubled_lovasz(&graph, &jump)?;
        let phi = phi_map(&scn2, &jump, &ssd, &dl, &hdl)?;
        let iso = lovasz_to_hdl_iso(&poset, &lovasz, &hdl)?;
        Ok(GraphComplexes {
            graph,
            poset,
            neighborhood,
            lovasz,
            box_z2,
            ssd,
            scn2,
            dl,
            partition,
            jump,
            hdl,
            phi,
            iso,
        })
    }

    pub fn collapse(&self) -> Result<CollapseSequence, ComplexError> {
        collapse_sequence(&self.graph, &self.poset, &self.dl, &self.jump, &self.hdl)
    }
}
