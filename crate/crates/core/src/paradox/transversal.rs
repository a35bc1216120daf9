use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{rank_of, FieldSpec, SparseVec, TrackedBasis};

/// For each slot `i`, the candidate vectors `T_1(e_i), …, T_k(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalInstance {
    field: FieldSpec,
    ambient: usize,
    candidates: Vec<Vec<SparseVec>>,
}

impl TransversalInstance {
    pub fn new(field: FieldSpec, ambient: usize, candidates: Vec<Vec<SparseVec>>) -> Result<Self> {
        for v in candidates.iter().flatten() {
            if let Some(c) = v.last_col() {
                if c >= ambient {
                    return Err(Error::LengthMismatch {
                        expected: ambient,
                        got: c + 1,
                    });
                }
            }
        }
        Ok(TransversalInstance {
            field,
            ambient,
            candidates,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn n_slots(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self, slot: usize) -> &[SparseVec] {
        &self.candidates[slot]
    }

    /// Dimension spanned by every candidate of the given slots.
    pub fn span_dim(&self, slots: &[usize]) -> usize {
        rank_of(
            self.field,
            self.ambient,
            slots.iter().flat_map(|&i| self.candidates[i].iter()),
        )
        .expect("candidate lengths are validated")
    }

    /// Each slot listed twice, so that a transversal picks two candidates.
    pub fn doubled(&self) -> TransversalInstance {
        TransversalInstance {
            field: self.field,
            ambient: self.ambient,
            candidates: self.candidates.iter().flat_map(|c| [c.clone(), c.clone()]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    /// `phi[i]` is the index of the chosen candidate of slot `i`.
    pub phi: Vec<usize>,
}

impl Transversal {
    /// Independent rank check of the selected vectors.
    pub fn verify(&self, inst: &TransversalInstance) -> bool {
        self.phi.len() == inst.n_slots()
            && self.phi.iter().enumerate().all(|(i, &j)| j < inst.candidates[i].len())
            && rank_of(
                inst.field,
                inst.ambient,
                self.phi.iter().enumerate().map(|(i, &j)| &inst.candidates[i][j]),
            )
            .is_ok_and(|r| r == inst.n_slots())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleTransversal {
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

impl DoubleTransversal {
    pub fn verify(&self, inst: &TransversalInstance) -> bool {
        let m = inst.n_slots();
        if self.phi.len() != m || self.psi.len() != m {
            return false;
        }
        let mut picked = Vec::with_capacity(2 * m);
        for i in 0..m {
            for j in [self.phi[i], self.psi[i]] {
                match inst.candidates[i].get(j) {
                    Some(v) => picked.push(v),
                    None => return false,
                }
            }
        }
        rank_of(inst.field, inst.ambient, picked).is_ok_and(|r| r == 2 * m)
    }
}

/// A slot set `I` whose candidates span fewer than `multiplicity·|I|`
/// dimensions, so no (multiple) transversal exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyWitness {
    pub slots: Vec<usize>,
    pub dim: usize,
    pub multiplicity: usize,
}

impl DeficiencyWitness {
    pub fn required(&self) -> usize {
        self.multiplicity * self.slots.len()
    }

    pub fn verify(&self, inst: &TransversalInstance) -> bool {
        self.slots.iter().all(|&i| i < inst.n_slots())
            && inst.span_dim(&self.slots) == self.dim
            && self.dim < self.required()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HallOutcome<T> {
    Found(T),
    Deficient(DeficiencyWitness),
}

impl<T> HallOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            HallOutcome::Found(t) => Some(t),
            HallOutcome::Deficient(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&DeficiencyWitness> {
        match self {
            HallOutcome::Found(_) => None,
            HallOutcome::Deficient(w) => Some(w),
        }
    }
}

/// Finds candidates `phi(i)` with linearly independent selected vectors, or
/// a slot set violating Rado's condition.
///
/// Slots are added one at a time. A new slot is matched by a shortest
/// augmenting path in the exchange graph of the partition matroid (one
/// vector per slot) and the linear matroid: from a vector outside the
/// selection to the selected vectors of its fundamental circuit, and from a
/// selected vector to the other candidates of its slot. Ties are broken by
/// ascending slot and candidate index.
pub fn hall_transversal(inst: &TransversalInstance) -> HallOutcome<Transversal> {
    let m = inst.n_slots();
    // element id <-> (slot, candidate)
    let mut elems: Vec<(usize, usize)> = Vec::new();
    let mut first: Vec<usize> = Vec::with_capacity(m + 1);
    for (i, c) in inst.candidates.iter().enumerate() {
        first.push(elems.len());
        elems.extend((0..c.len()).map(|j| (i, j)));
    }
    first.push(elems.len());
    let vec_of = |id: usize| &inst.candidates[elems[id].0][elems[id].1];

    let mut chosen: Vec<Option<usize>> = vec![None; m];
    let mut basis = TrackedBasis::new(inst.field);

    for s in 0..m {
        let fresh = first[s]..first[s + 1];
        if let Some(id) = fresh.clone().find(|&id| basis.is_independent(vec_of(id))) {
            basis.insert(id, vec_of(id));
            chosen[s] = Some(id);
            continue;
        }
        // breadth-first search over element ids
        let mut parent: Vec<Option<usize>> = vec![None; elems.len()];
        let mut seen = vec![false; elems.len()];
        let mut queue = VecDeque::new();
        for id in fresh.clone() {
            seen[id] = true;
            queue.push_back(id);
        }
        let in_selection = |id: usize, chosen: &[Option<usize>]| chosen[elems[id].0] == Some(id);
        let mut sink = None;
        while let Some(u) = queue.pop_front() {
            if in_selection(u, &chosen) {
                let slot = elems[u].0;
                for x in first[slot]..first[slot + 1] {
                    if x != u && !seen[x] {
                        seen[x] = true;
                        parent[x] = Some(u);
                        queue.push_back(x);
                    }
                }
            } else {
                match basis.circuit(vec_of(u)) {
                    None => {
                        sink = Some(u);
                        break;
                    }
                    Some(circ) => {
                        for y in circ {
                            if !seen[y] {
                                seen[y] = true;
                                parent[y] = Some(u);
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        match sink {
            Some(mut x) => {
                // path alternates non-selected x, selected y; walk back from the sink
                loop {
                    let slot = elems[x].0;
                    match parent[x] {
                        None => {
                            chosen[slot] = Some(x);
                            break;
                        }
                        Some(y) => {
                            // y is the selected element of x's slot
                            chosen[slot] = Some(x);
                            x = parent[y].expect("selected vertex has a parent");
                        }
                    }
                }
                basis = TrackedBasis::new(inst.field);
                for id in chosen.iter().flatten() {
                    basis.insert(*id, vec_of(*id));
                }
            }
            None => {
                let mut slots: Vec<usize> = chosen
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_some_and(|id| seen[id]))
                    .map(|(i, _)| i)
                    .collect();
                slots.push(s);
                slots.sort_unstable();
                let dim = inst.span_dim(&slots);
                debug_assert!(dim < slots.len());
                return HallOutcome::Deficient(DeficiencyWitness {
                    slots,
                    dim,
                    multiplicity: 1,
                });
            }
        }
    }
    HallOutcome::Found(Transversal {
        phi: chosen.into_iter().map(|c| elems[c.unwrap()].1).collect(),
    })
}

/// Two candidates per slot with all `2m` selected vectors independent, or a
/// slot set whose candidates span fewer than `2|I|` dimensions.
///
/// Solved as a single transversal problem on the instance with every slot
/// listed twice; by Rado's theorem this is exact.
pub fn double_transversal(inst: &TransversalInstance) -> HallOutcome<DoubleTransversal> {
    match hall_transversal(&inst.doubled()) {
        HallOutcome::Found(t) => {
            let (mut phi, mut psi) = (Vec::new(), Vec::new());
            for pair in t.phi.chunks(2) {
                phi.push(pair[0].min(pair[1]));
                psi.push(pair[0].max(pair[1]));
            }
            HallOutcome::Found(DoubleTransversal { phi, psi })
        }
        HallOutcome::Deficient(w) => {
            let mut slots: Vec<usize> = w.slots.iter().map(|s| s / 2).collect();
            slots.dedup();
            let dim = inst.span_dim(&slots);
            HallOutcome::Deficient(DeficiencyWitness {
                slots,
                dim,
                multiplicity: 2,
            })
        }
    }
}
