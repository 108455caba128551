//! Compression of intersecting set families.
//!
//! A *shift* removes one element from one member while keeping the family
//! intersecting; repeating shifts drives a family to a *terminal* form in
//! which no element can be removed from any member. Terminal families are
//! antichains with the unique-intersection property: every element of every
//! member is the sole meeting point with some other member. Terminal forms
//! act as generators — expanding a terminal family back to all supersets of
//! its members at a fixed uniformity recovers the maximal family it came
//! from.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::hypergraph::SetFamily;

/// Errors from the shifting procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    /// Shifting is defined for intersecting families only.
    #[error("family is not intersecting: members {a:?} and {b:?} are disjoint")]
    NotIntersecting { a: Vec<u32>, b: Vec<u32> },
    /// The exhaustive policy walks every shift order and needs a small family.
    #[error("family has {members} members; exploring all shift orders is limited to {guard}")]
    TooLargeForExploration { members: usize, guard: usize },
}

/// Member cap for the all-orders exploration.
pub const EXPLORATION_GUARD: usize = 12;
/// Safety cap on distinct families visited during exploration.
const EXPLORATION_STATE_GUARD: usize = 500_000;

/// One shift: remove `element` from `member`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShiftMove {
    pub member: Vec<u32>,
    pub element: u32,
}

/// A recorded step of a deterministic run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftStep {
    pub applied: ShiftMove,
    /// The shrunken member was already present, so the family lost a member.
    pub merged: bool,
    /// Member count after the step.
    pub members_after: usize,
}

/// Full record of a deterministic terminalization.
#[derive(Debug, Clone)]
pub struct ShiftTrace {
    pub initial: SetFamily,
    pub steps: Vec<ShiftStep>,
    pub result: SetFamily,
}

fn ensure_intersecting(family: &SetFamily) -> Result<(), ShiftError> {
    let members = family.members();
    for (k, a) in members.iter().enumerate() {
        for b in &members[k + 1..] {
            if a.iter().all(|v| !b.contains(v)) {
                return Err(ShiftError::NotIntersecting { a: a.clone(), b: b.clone() });
            }
        }
    }
    Ok(())
}

/// Whether removing `element` from `member` keeps the family intersecting
/// and nonempty. Singleton members admit no legal shift.
pub fn is_legal_shift(family: &SetFamily, member: &[u32], element: u32) -> bool {
    if member.len() < 2 || !member.contains(&element) {
        return false;
    }
    let shrunk: Vec<u32> = member.iter().copied().filter(|&v| v != element).collect();
    family
        .members()
        .iter()
        .filter(|b| b.as_slice() != member)
        .all(|b| b.iter().any(|v| shrunk.contains(v)))
}

/// All legal shifts, sorted by (member, element); the first entry is the
/// move the deterministic policy takes.
pub fn legal_moves(family: &SetFamily) -> Vec<ShiftMove> {
    let mut moves = Vec::new();
    for member in family.members() {
        for &element in member {
            if is_legal_shift(family, member, element) {
                moves.push(ShiftMove { member: member.clone(), element });
            }
        }
    }
    moves.sort();
    moves
}

/// Applies one shift (assumed legal): replaces the member by the shrunken
/// set, merging with an existing copy if present.
pub fn apply_shift(family: &SetFamily, mv: &ShiftMove) -> SetFamily {
    let mut members: Vec<Vec<u32>> = Vec::with_capacity(family.len());
    for m in family.members() {
        if m == &mv.member {
            members.push(m.iter().copied().filter(|&v| v != mv.element).collect());
        } else {
            members.push(m.clone());
        }
    }
    SetFamily::new(family.n(), members).expect("shift output is a valid family")
}

/// No legal shift applies.
pub fn is_terminal(family: &SetFamily) -> bool {
    family
        .members()
        .iter()
        .all(|m| m.iter().all(|&e| !is_legal_shift(family, m, e)))
}

/// Every element of every member is the entire intersection with some
/// member: for each `A` and each `i` in `A` there is a `B` with
/// `A ∩ B = {i}`. Equivalent to terminality for intersecting families.
pub fn has_unique_intersections(family: &SetFamily) -> bool {
    let members = family.members();
    members.iter().all(|a| {
        a.iter().all(|&i| {
            members.iter().any(|b| {
                let mut inter = a.iter().filter(|v| b.contains(*v));
                inter.next() == Some(&i) && inter.next().is_none()
            })
        })
    })
}

/// Runs the deterministic policy — always the lexicographically smallest
/// legal (member, element) — to a terminal family, recording every step.
/// Terminates because each step lowers the total member size.
pub fn shift_terminal(family: &SetFamily) -> Result<ShiftTrace, ShiftError> {
    ensure_intersecting(family)?;
    let initial = family.clone();
    let mut current = family.clone();
    let mut steps = Vec::new();
    loop {
        let moves = legal_moves(&current);
        let Some(mv) = moves.into_iter().next() else { break };
        let before = current.len();
        current = apply_shift(&current, &mv);
        steps.push(ShiftStep {
            merged: current.len() < before,
            members_after: current.len(),
            applied: mv,
        });
    }
    Ok(ShiftTrace { initial, steps, result: current })
}

/// Explores every shift order and returns all reachable terminal families
/// (guarded: at most [`EXPLORATION_GUARD`] members).
pub fn all_terminals(family: &SetFamily) -> Result<Vec<SetFamily>, ShiftError> {
    ensure_intersecting(family)?;
    if family.len() > EXPLORATION_GUARD {
        return Err(ShiftError::TooLargeForExploration {
            members: family.len(),
            guard: EXPLORATION_GUARD,
        });
    }
    let key = |f: &SetFamily| f.members().to_vec();
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let mut terminals: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(key(family));
    queue.push_back(family.clone());
    while let Some(state) = queue.pop_front() {
        let moves = legal_moves(&state);
        if moves.is_empty() {
            terminals.insert(key(&state));
            continue;
        }
        for mv in moves {
            let next = apply_shift(&state, &mv);
            if seen.insert(key(&next)) {
                assert!(
                    seen.len() <= EXPLORATION_STATE_GUARD,
                    "shift exploration exceeded {EXPLORATION_STATE_GUARD} states"
                );
                queue.push_back(next);
            }
        }
    }
    Ok(terminals
        .into_iter()
        .map(|members| SetFamily::new(family.n(), members).expect("valid family"))
        .collect())
}

/// For a maximal intersecting uniform family: compressing to terminal form
/// and re-expanding at the original uniformity must reproduce the family.
pub fn generation_roundtrip(graph: &crate::hypergraph::Hypergraph) -> Result<bool, ShiftError> {
    let family = graph.to_set_family();
    let trace = shift_terminal(&family)?;
    let regenerated = trace
        .result
        .generate(graph.n(), graph.r())
        .expect("terminal members fit the uniformity");
    Ok(regenerated == *graph)
}
