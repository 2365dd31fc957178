//! Conflict detection between plans.
//!
//! All detectors share the same timeline convention: plan locations are
//! compared at every time step `x` from 0 through the longest plan's action
//! count, with [`Plan::location_at`] supplying positions beyond a plan's end
//! (the final location under [`TargetBehavior::Stay`], absence under
//! [`TargetBehavior::Disappear`]). An absent agent participates in no
//! conflict. Beyond the scan horizon every location is constant, so each
//! persisting coincidence is reported once, at the last scanned step.
//!
//! The defining conditions, for agents `i` and `j` at step `x`:
//!
//! * vertex: `loc_i(x) = loc_j(x)`
//! * edge: `loc_i(x) = loc_j(x)` and `loc_i(x+1) = loc_j(x+1)`
//! * following: `loc_i(x+1) = loc_j(x)` (agent `i` follows agent `j`;
//!   checked in both directions)
//! * swapping: `loc_i(x+1) = loc_j(x)` and `loc_j(x+1) = loc_i(x)`
//! * cycle: for agents `a_1, ..., a_m` (`m >= 2`) arranged in a ring,
//!   `loc_{a_r}(x+1) = loc_{a_{r+1}}(x)` for every `r`, cyclically
//!
//! A swapping conflict is exactly a two-agent cycle, so two-agent rotations
//! are reported under both kinds.

use crate::model::{ConflictKind, Plan, SemanticsProfile, Solution, TargetBehavior, Vertex};

/// A detected conflict: which kind, which agents, at which time step, and
/// the vertices that witness it.
///
/// * vertex: one vertex, the shared cell
/// * edge: the shared cell at `time` and the shared cell at `time + 1`
/// * following: the followed cell (`agents[0]` moves into it at `time + 1`,
///   `agents[1]` occupied it at `time`)
/// * swapping: the two exchanged cells, in agent order
/// * cycle: the ring's cells at `time`, in rotation order
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Conflict {
    pub kind: ConflictKind,
    pub agents: Vec<usize>,
    pub time: usize,
    pub vertices: Vec<Vertex>,
}

fn sort_key(c: &Conflict) -> (usize, ConflictKind, Vec<usize>, Vec<Vertex>) {
    (c.time, c.kind, c.agents.clone(), c.vertices.clone())
}

/// Detects the requested pairwise conflict kinds between two plans. Agent 0
/// is the first plan, agent 1 the second; [`solution_conflicts`] relabels.
///
/// `kinds` entries other than vertex, edge, following, and swapping are
/// ignored: a cycle can involve more than two agents, so cycles are the job
/// of [`cycle_conflicts`].
pub fn pairwise_conflicts(
    plan1: &Plan,
    plan2: &Plan,
    kinds: &[ConflictKind],
    behavior: TargetBehavior,
) -> Vec<Conflict> {
    let mut out = Vec::new();
    pairwise_into(0, 1, plan1, plan2, kinds, behavior, &mut out);
    out.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    out
}

fn pairwise_into(
    i: usize,
    j: usize,
    plan_i: &Plan,
    plan_j: &Plan,
    kinds: &[ConflictKind],
    behavior: TargetBehavior,
    out: &mut Vec<Conflict>,
) {
    let want = |k: ConflictKind| kinds.contains(&k);
    let horizon = plan_i.action_count().max(plan_j.action_count());
    for x in 0..=horizon {
        let cur_i = plan_i.location_at(x, behavior);
        let cur_j = plan_j.location_at(x, behavior);
        let next_i = plan_i.location_at(x + 1, behavior);
        let next_j = plan_j.location_at(x + 1, behavior);

        let same_cur = matches!((cur_i, cur_j), (Some(a), Some(b)) if a == b);
        let same_next = matches!((next_i, next_j), (Some(a), Some(b)) if a == b);
        let i_follows_j = matches!((next_i, cur_j), (Some(a), Some(b)) if a == b);
        let j_follows_i = matches!((next_j, cur_i), (Some(a), Some(b)) if a == b);

        if want(ConflictKind::Vertex) && same_cur {
            out.push(Conflict {
                kind: ConflictKind::Vertex,
                agents: vec![i, j],
                time: x,
                vertices: vec![cur_i.unwrap()],
            });
        }
        if want(ConflictKind::Edge) && same_cur && same_next {
            out.push(Conflict {
                kind: ConflictKind::Edge,
                agents: vec![i, j],
                time: x,
                vertices: vec![cur_i.unwrap(), next_i.unwrap()],
            });
        }
        if want(ConflictKind::Following) {
            if i_follows_j {
                out.push(Conflict {
                    kind: ConflictKind::Following,
                    agents: vec![i, j],
                    time: x,
                    vertices: vec![cur_j.unwrap()],
                });
            }
            if j_follows_i {
                out.push(Conflict {
                    kind: ConflictKind::Following,
                    agents: vec![j, i],
                    time: x,
                    vertices: vec![cur_i.unwrap()],
                });
            }
        }
        if want(ConflictKind::Swapping) && i_follows_j && j_follows_i {
            out.push(Conflict {
                kind: ConflictKind::Swapping,
                agents: vec![i, j],
                time: x,
                vertices: vec![cur_i.unwrap(), cur_j.unwrap()],
            });
        }
    }
}

/// Detects rotations: for each time step, groups of two or more agents that
/// each move into the cell the next agent of the ring just vacated.
///
/// Per step, the agents are decomposed into disjoint rings deterministically
/// (each agent belongs to at most one reported cycle per step). Reported
/// rings start at their smallest agent index. Every two-agent ring is a
/// swapping conflict by definition, so it is reported twice: once with kind
/// cycle and once with kind swapping.
pub fn cycle_conflicts(solution: &Solution, behavior: TargetBehavior) -> Vec<Conflict> {
    let plans = &solution.plans;
    let mut out = Vec::new();
    if plans.len() < 2 {
        return out;
    }
    let horizon = plans.iter().map(Plan::action_count).max().unwrap_or(0);
    for x in 0..=horizon {
        let cur: Vec<Option<Vertex>> =
            plans.iter().map(|p| p.location_at(x, behavior)).collect();
        let next: Vec<Option<Vertex>> =
            plans.iter().map(|p| p.location_at(x + 1, behavior)).collect();
        for ring in step_rings(&cur, &next) {
            out.extend(ring_conflicts(&ring, &cur, x));
        }
    }
    out.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    out
}

/// Deterministic disjoint ring decomposition of a single step: rings of two
/// or more agents in the successor graph (an edge `a -> b` when `b`'s
/// current cell is `a`'s destination). Each agent joins at most one ring,
/// and each ring is rotated to start at its smallest agent index.
///
/// When simultaneous locations are distinct the successor graph is
/// functional and this is an exact cycle decomposition.
pub(crate) fn step_rings(cur: &[Option<Vertex>], next: &[Option<Vertex>]) -> Vec<Vec<usize>> {
    let n = cur.len();
    let successors: Vec<Vec<usize>> = (0..n)
        .map(|a| match next[a] {
            None => Vec::new(),
            Some(dest) => {
                (0..n).filter(|&b| b != a && cur[b] == Some(dest)).collect()
            }
        })
        .collect();

    let mut rings = Vec::new();
    let mut done = vec![false; n];
    for start in 0..n {
        if done[start] {
            continue;
        }
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        loop {
            let a = *path.last().unwrap();
            // Close a ring as early as possible, otherwise walk on.
            let closing = successors[a].iter().copied().find(|&b| on_path[b]);
            let step =
                closing.or_else(|| successors[a].iter().copied().find(|&b| !done[b]));
            match step {
                Some(b) if on_path[b] => {
                    let at = path.iter().position(|&p| p == b).unwrap();
                    let ring = &path[at..];
                    if ring.len() >= 2 {
                        let smallest =
                            ring.iter().enumerate().min_by_key(|&(_, a)| a).map(|(pos, _)| pos).unwrap();
                        rings.push(
                            (0..ring.len()).map(|r| ring[(smallest + r) % ring.len()]).collect(),
                        );
                    }
                    break;
                }
                Some(b) => {
                    on_path[b] = true;
                    path.push(b);
                }
                None => break,
            }
        }
        for a in path {
            done[a] = true;
        }
    }
    rings
}

/// Emits a canonical ring's cycle conflict, plus the swapping form for
/// two-agent rings.
fn ring_conflicts(agents: &[usize], cur: &[Option<Vertex>], time: usize) -> Vec<Conflict> {
    let agents = agents.to_vec();
    let vertices: Vec<Vertex> = agents.iter().map(|&a| cur[a].unwrap()).collect();
    let mut out = vec![Conflict { kind: ConflictKind::Cycle, agents: agents.clone(), time, vertices: vertices.clone() }];
    if agents.len() == 2 {
        out.push(Conflict { kind: ConflictKind::Swapping, agents, time, vertices });
    }
    out
}

/// All conflicts of a solution that the profile forbids: the union of
/// pairwise detection over every agent pair plus, when cycles are forbidden,
/// the rotation detector. Duplicates (a two-agent rotation seen by both
/// detectors) are removed. Output is sorted by time, kind, agents.
pub fn solution_conflicts(solution: &Solution, profile: &SemanticsProfile) -> Vec<Conflict> {
    let pairwise_kinds: Vec<ConflictKind> = [
        ConflictKind::Vertex,
        ConflictKind::Edge,
        ConflictKind::Following,
        ConflictKind::Swapping,
    ]
    .into_iter()
    .filter(|&k| profile.is_forbidden(k))
    .collect();

    let mut out = Vec::new();
    let plans = &solution.plans;
    if !pairwise_kinds.is_empty() {
        for i in 0..plans.len() {
            for j in i + 1..plans.len() {
                pairwise_into(
                    i,
                    j,
                    &plans[i],
                    &plans[j],
                    &pairwise_kinds,
                    profile.target_behavior,
                    &mut out,
                );
            }
        }
    }
    if profile.is_forbidden(ConflictKind::Cycle) {
        out.extend(cycle_conflicts(solution, profile.target_behavior));
    }
    out.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    out.dedup();
    out
}
