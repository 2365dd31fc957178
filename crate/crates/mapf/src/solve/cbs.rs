//! Conflict-based search: an optimal two-level solver.
//!
//! The high level grows a tree of constraint sets. Each node plans every
//! agent independently (optimally) under the node's constraints, picks one
//! conflict between those plans, and branches on the alternative
//! single-agent constraints that rule the conflict out. Nodes are expanded
//! cheapest-first, so the first conflict-free node popped carries an optimal
//! solution. The low level is the space-time A* in [`super::astar`].
//!
//! Which conflict a node branches on matters enormously for tree size, so
//! conflicts are ranked by how binding they are: a conflict is branched on
//! first when every one of its branch constraints is *forced* — violated by
//! every optimal plan of its agent, read off the agent's per-step envelope
//! of optimal-path positions — because then both children must grow strictly
//! costlier and the cost floor rises instead of the tree widening. Half-
//! forced conflicts come next, arbitrary ones last.
//!
//! Constraint trees still degenerate when a few agents are genuinely
//! coupled — streams meeting in a one-wide corridor, dances around a
//! parked agent's cell — because one-constraint-at-a-time replanning must
//! enumerate every way of delaying every agent. Agents whose conflicts keep
//! getting split are therefore merged into one group, the search restarts,
//! and the group is thereafter replanned as a unit by the coupled search in
//! [`super::joint`]. The two levels cover each other's weakness: branching
//! stays cheap while agents are independent, and a knot of entangled agents
//! collapses into one small joint search instead of an exponential tree.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::rc::Rc;

use crate::conflict::{solution_conflicts, Conflict};
use crate::model::{
    ConflictKind, Grid, Instance, Objective, Plan, SemanticsProfile, Solution, TargetBehavior,
    Vertex,
};
use crate::objective::{makespan, plan_cost, sum_of_costs};
use crate::solve::astar::{space_time_astar, Occupancy, PathQuery, PathSearch};
use crate::solve::joint::{joint_plans, GroupQuery, GroupSearch};
use crate::solve::{
    completeness_horizon, Constraint, ConstraintTable, SolveError, SolveOutcome, SolverBudget,
};

/// One node of the constraint tree. Nodes live in an arena and carry only
/// the constraint they added; a node's full constraint set is the chain of
/// `constraint` entries along its `parent` links. Plans are shared through
/// `Rc` because a child differs from its parent in exactly one agent's plan.
struct Node {
    parent: Option<usize>,
    /// `(agent, constraint)` added relative to the parent. `None` for the
    /// root and for bypass nodes, which keep the parent's constraint set and
    /// only adopt better plans.
    constraint: Option<(usize, Constraint)>,
    plans: Vec<Rc<Plan>>,
    cost: usize,
    conflict_count: usize,
    /// The conflict this node branches on: the most binding one among its
    /// plans' conflicts. `None` means the plans are a solution.
    split: Option<Conflict>,
}

/// Open-list entry ordered for a max-heap so that `pop` yields the cheapest
/// node first, breaking ties toward fewer remaining conflicts and then
/// toward the oldest node (stable, deterministic expansion order).
struct OpenEntry {
    cost: usize,
    conflict_count: usize,
    seq: u64,
    node: usize,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        (other.cost, other.conflict_count, other.seq).cmp(&(
            self.cost,
            self.conflict_count,
            self.seq,
        ))
    }
}

/// Solves `instance` optimally under `profile`, searching plans of up to
/// `passable cells + agent count` actions per agent — enough to realize any
/// solvable instance, so exhausting the tree proves unsolvability.
pub fn cbs(
    instance: &Instance,
    profile: &SemanticsProfile,
    budget: &SolverBudget,
) -> Result<SolveOutcome, SolveError> {
    cbs_with_horizon(instance, profile, budget, completeness_horizon(instance))
}

/// Across how many distinct node costs a pair of agents from different
/// groups may be chosen as the split conflict before their groups are
/// merged. A pair still in conflict after the cost bound has risen this
/// many times marks a gap that constraint splitting is paying off one unit
/// at a time — exponentially many nodes — while a pair that merely crosses
/// paths is resolved within a level or two and never couples its agents.
const MERGE_LEVELS: u32 = 4;

/// Largest agent count at which groups are merged at all. On an instance
/// this small, repeated merging escalates to one coupled search over the
/// whole instance, which settles the knots no sequence of constraints can
/// untangle cheaply (swaps through a corridor, rotations around a block).
/// On a larger instance a merged group capped below the agent count could
/// never swallow such a knot anyway, and the coupled replanning it buys
/// costs far more per node than the decomposed replanning it displaces, so
/// larger instances rely on splitting alone.
const MERGE_LIMIT: usize = 4;

/// [`cbs`] with an explicit cap on per-agent plan length (in actions).
/// `Unsolvable` then means "unsolvable within `horizon`".
pub fn cbs_with_horizon(
    instance: &Instance,
    profile: &SemanticsProfile,
    budget: &SolverBudget,
    horizon: usize,
) -> Result<SolveOutcome, SolveError> {
    let grid = instance.grid();
    let agent_count = instance.agent_count();
    let passable = grid.passable_count();
    let dist_tables: Vec<Vec<u32>> = (0..agent_count)
        .map(|agent| grid.bfs_distances(instance.target(agent)))
        .collect();

    // groups[agent] names the agent's group by its smallest member. Agents
    // that keep conflicting are merged into one group mid-search and
    // replanned from then on as a unit by the coupled search in
    // [`super::joint`]: decomposed replanning enumerates a tight tangle one
    // constraint at a time, while the joint state space of a small knot of
    // agents is tiny. Merging never restarts the tree — a node's cost is
    // the summed optimum of its groups under its constraints, which bounds
    // every solution below the node from below whatever the grouping, so
    // nodes made before a merge stay sound afterwards.
    let mut groups: Vec<usize> = (0..agent_count).collect();
    // Per cross-group pair: the last node cost at which the pair was picked
    // for splitting, and how many distinct costs it has been picked at.
    let mut pair_friction: HashMap<(usize, usize), (usize, u32)> = HashMap::new();
    let merging = agent_count <= MERGE_LIMIT;

    // Root: plan each agent alone without constraints, steering around the
    // plans already made so the root starts with as few conflicts as it can
    // get for free.
    let no_constraints = ConstraintTable::new([]);
    let mut seeded: Vec<Option<Rc<Plan>>> = vec![None; agent_count];
    {
        for agent in 0..agent_count {
            let low_horizon = (passable + 1).min(horizon);
            let avoid = Occupancy::build(
                seeded.iter().flatten().map(|plan| plan.as_ref()),
                usize::MAX,
                profile.target_behavior,
                low_horizon,
            );
            let query = PathQuery {
                grid,
                source: instance.source(agent),
                target: instance.target(agent),
                dist_to_target: &dist_tables[agent],
                constraints: &no_constraints,
                behavior: profile.target_behavior,
                horizon: low_horizon,
                avoid: Some(&avoid),
            };
            match space_time_astar(&query, budget) {
                PathSearch::Found(plan) => seeded[agent] = Some(Rc::new(plan)),
                // No individual path within the horizon means no joint
                // solution within it either.
                PathSearch::Exhausted => return Ok(SolveOutcome::Unsolvable),
                PathSearch::OutOfBudget => return Ok(SolveOutcome::Timeout),
            }
        }
    }
    let root_plans: Vec<Rc<Plan>> =
        seeded.into_iter().map(|plan| plan.expect("every agent was planned")).collect();

    let mut arena: Vec<Node> = Vec::new();
    let mut open: BinaryHeap<OpenEntry> = BinaryHeap::new();
    let mut seq = 0u64;

    let root = build_node(instance, profile, &arena, None, None, root_plans);
    open.push(OpenEntry {
        cost: root.cost,
        conflict_count: root.conflict_count,
        seq,
        node: 0,
    });
    arena.push(root);

    let mut expansions = 0u64; // TEMP instrumentation
    while let Some(entry) = open.pop() {
        if budget.expired() {
            if std::env::var_os("CBS_STATS").is_some() {
                eprintln!("CBS_STATS tree timeout after expansions={expansions}");
            }
            return Ok(SolveOutcome::Timeout);
        }
        expansions += 1;
        let node = entry.node;
        let Some(conflict) = arena[node].split.clone() else {
            if std::env::var_os("CBS_STATS").is_some() {
                eprintln!("CBS_STATS tree solved after expansions={expansions}");
            }
            let plans = arena[node].plans.iter().map(|plan| (**plan).clone()).collect();
            return Ok(SolveOutcome::Solved(Solution::new(plans).canonical()));
        };

        // Track the friction between the split conflict's groups; a pair
        // that stays in conflict across too many cost levels is one that
        // constraints are not untangling, so merge its groups and replan
        // them as a unit from this expansion on. Node costs pop in
        // non-decreasing order, so comparing against the last recorded cost
        // counts distinct levels.
        let node_cost = arena[node].cost;
        for (i, &a) in conflict.agents.iter().enumerate() {
            for &b in &conflict.agents[i + 1..] {
                if groups[a] == groups[b] {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                let (last_cost, levels) =
                    pair_friction.entry(key).or_insert((node_cost, 0));
                if *levels == 0 || *last_cost != node_cost {
                    *last_cost = node_cost;
                    *levels += 1;
                }
                if *levels >= MERGE_LEVELS && mergeable(&groups, groups[a], groups[b]) {
                    if std::env::var_os("CBS_STATS").is_some() {
                        eprintln!("CBS_STATS merged ({a},{b}) at expansions={expansions}");
                    }
                    let (merged_a, merged_b) = (groups[a], groups[b]);
                    let representative = merged_a.min(merged_b);
                    for slot in groups.iter_mut() {
                        if *slot == merged_a || *slot == merged_b {
                            *slot = representative;
                        }
                    }
                    // With everyone in one group the tree has nothing left
                    // to decompose; the coupled search over the whole
                    // instance is itself complete and optimal within the
                    // horizon, so its answer is the answer.
                    if groups.iter().all(|&group| group == 0) {
                        let members: Vec<usize> = (0..agent_count).collect();
                        let tables: Vec<ConstraintTable> =
                            members.iter().map(|_| ConstraintTable::new([])).collect();
                        return Ok(match plan_group(
                            instance,
                            profile,
                            &dist_tables,
                            &members,
                            &tables,
                            horizon,
                            budget,
                        ) {
                            GroupSearch::Found(plans) => {
                                SolveOutcome::Solved(Solution::new(plans).canonical())
                            }
                            GroupSearch::Exhausted => SolveOutcome::Unsolvable,
                            GroupSearch::OutOfBudget => SolveOutcome::Timeout,
                        });
                    }
                }
            }
        }

        // In any conflict-free solution at least one of the branch
        // constraints must hold, so splitting on them keeps every solution
        // reachable in the tree. Each branch replans the whole group of the
        // constrained agent.
        let mut children = Vec::new();
        let mut bypass = None;
        for (agent, constraint) in branch_constraints(&conflict) {
            let added = Some((agent, constraint));
            let members: Vec<usize> =
                (0..agent_count).filter(|&x| groups[x] == groups[agent]).collect();
            let replanned = if let [agent] = members[..] {
                let table =
                    ConstraintTable::new(agent_constraints(&arena, Some(node), added, agent));
                let low_horizon = (passable + table.max_time() + 1).min(horizon);
                let avoid = Occupancy::build(
                    arena[node].plans.iter().map(|plan| plan.as_ref()),
                    agent,
                    profile.target_behavior,
                    low_horizon,
                );
                let query = PathQuery {
                    grid,
                    source: instance.source(agent),
                    target: instance.target(agent),
                    dist_to_target: &dist_tables[agent],
                    constraints: &table,
                    behavior: profile.target_behavior,
                    horizon: low_horizon,
                    avoid: Some(&avoid),
                };
                match space_time_astar(&query, budget) {
                    PathSearch::Found(plan) => {
                        let mut plans = arena[node].plans.clone();
                        plans[agent] = Rc::new(plan);
                        Some(plans)
                    }
                    // An empty branch: no plan satisfies this constraint set
                    // within the horizon.
                    PathSearch::Exhausted => None,
                    PathSearch::OutOfBudget => {
                        return Ok(SolveOutcome::Timeout)
                    }
                }
            } else {
                let tables: Vec<ConstraintTable> = members
                    .iter()
                    .map(|&m| {
                        ConstraintTable::new(agent_constraints(&arena, Some(node), added, m))
                    })
                    .collect();
                match plan_group(
                    instance,
                    profile,
                    &dist_tables,
                    &members,
                    &tables,
                    horizon,
                    budget,
                ) {
                    GroupSearch::Found(new_plans) => {
                        let mut plans = arena[node].plans.clone();
                        for (&member, plan) in members.iter().zip(new_plans) {
                            plans[member] = Rc::new(plan);
                        }
                        Some(plans)
                    }
                    GroupSearch::Exhausted => None,
                    GroupSearch::OutOfBudget => {
                        return Ok(SolveOutcome::Timeout)
                    }
                }
            };
            let Some(plans) = replanned else { continue };
            // Bypass: a re-plan that keeps the node's cost but strictly
            // reduces its conflicts replaces branching altogether. The node
            // re-enters the queue with the better plans and no extra
            // constraint, which preserves optimality and usually shrinks
            // the tree.
            let (cost, conflicts) = evaluate(&plans, profile);
            if cost == arena[node].cost && conflicts.len() < arena[node].conflict_count {
                bypass = Some(finish_node(
                    instance,
                    profile,
                    &arena,
                    Some(node),
                    None,
                    plans,
                    cost,
                    conflicts,
                ));
                break;
            }
            children.push(finish_node(
                instance,
                profile,
                &arena,
                Some(node),
                added,
                plans,
                cost,
                conflicts,
            ));
        }

        let adopted = match bypass {
            Some(node) => vec![node],
            None => children,
        };
        for child in adopted {
            seq += 1;
            let index = arena.len();
            open.push(OpenEntry {
                cost: child.cost,
                conflict_count: child.conflict_count,
                seq,
                node: index,
            });
            arena.push(child);
        }
    }

    // Constraints live in a finite universe of (cell, time) and (move, time)
    // pairs below the horizon and every branch adds a constraint its agent's
    // current plan violates, so the tree is finite: draining it proves no
    // solution exists within the horizon.
    Ok(SolveOutcome::Unsolvable)
}

/// Upper bound on a merged group's size. The coupled search enumerates
/// joint moves, so its branching factor is exponential in the member
/// count; beyond a handful of agents a single expansion becomes
/// intractable. Four members cover the knots constraint splitting cannot
/// untangle on its own (rotations, corridor swaps) while keeping every
/// joint expansion small.
const MERGE_LIMIT: usize = 4;

/// Whether merging these two groups keeps the joint search tractable.
fn mergeable(groups: &[usize], group_a: usize, group_b: usize) -> bool {
    groups.iter().filter(|&&g| g == group_a || g == group_b).count() <= MERGE_LIMIT
}

/// Plans `members` jointly under their constraint tables.
fn plan_group(
    instance: &Instance,
    profile: &SemanticsProfile,
    dist_tables: &[Vec<u32>],
    members: &[usize],
    tables: &[ConstraintTable],
    horizon: usize,
    budget: &SolverBudget,
) -> GroupSearch {
    let dist: Vec<&[u32]> = members.iter().map(|&m| dist_tables[m].as_slice()).collect();
    let query = GroupQuery {
        grid: instance.grid(),
        sources: members.iter().map(|&m| instance.source(m)).collect(),
        targets: members.iter().map(|&m| instance.target(m)).collect(),
        dist: &dist,
        tables,
        profile,
        horizon,
    };
    joint_plans(&query, budget)
}

/// Cost and conflicts (in detection order) of a set of plans.
fn evaluate(plans: &[Rc<Plan>], profile: &SemanticsProfile) -> (usize, Vec<Conflict>) {
    let solution = Solution::new(plans.iter().map(|plan| (**plan).clone()).collect());
    let conflicts = solution_conflicts(&solution, profile);
    let cost = match profile.objective {
        Objective::SumOfCosts => sum_of_costs(&solution),
        Objective::Makespan => makespan(&solution),
    };
    (cost, conflicts)
}

/// Builds a node, evaluating its plans and choosing its split conflict.
fn build_node(
    instance: &Instance,
    profile: &SemanticsProfile,
    arena: &[Node],
    parent: Option<usize>,
    added: Option<(usize, Constraint)>,
    plans: Vec<Rc<Plan>>,
) -> Node {
    let (cost, conflicts) = evaluate(&plans, profile);
    finish_node(instance, profile, arena, parent, added, plans, cost, conflicts)
}

/// [`build_node`] with the evaluation already done.
#[allow(clippy::too_many_arguments)]
fn finish_node(
    instance: &Instance,
    profile: &SemanticsProfile,
    arena: &[Node],
    parent: Option<usize>,
    added: Option<(usize, Constraint)>,
    plans: Vec<Rc<Plan>>,
    cost: usize,
    conflicts: Vec<Conflict>,
) -> Node {
    let split = choose_split(instance, profile, arena, parent, added, &plans, &conflicts);
    Node { parent, constraint: added, plans, cost, conflict_count: conflicts.len(), split }
}

/// Picks the conflict to branch on: the first conflict all of whose branch
/// constraints are forced (each child must then find a strictly costlier
/// plan), else the first with at least one forced side, else simply the
/// first. Ties follow the detector's deterministic conflict order.
fn choose_split(
    instance: &Instance,
    profile: &SemanticsProfile,
    arena: &[Node],
    parent: Option<usize>,
    added: Option<(usize, Constraint)>,
    plans: &[Rc<Plan>],
    conflicts: &[Conflict],
) -> Option<Conflict> {
    if conflicts.len() <= 1 {
        return conflicts.first().cloned();
    }
    let mut envelopes: HashMap<usize, Envelope> = HashMap::new();
    let mut half_forced: Option<&Conflict> = None;
    for conflict in conflicts {
        let branches = branch_constraints(conflict);
        let mut forced = 0;
        for (agent, constraint) in &branches {
            let envelope = envelopes.entry(*agent).or_insert_with(|| {
                let table = ConstraintTable::new(agent_constraints(
                    arena, parent, added, *agent,
                ));
                Envelope::build(
                    instance.grid(),
                    instance.source(*agent),
                    instance.target(*agent),
                    plan_cost(&plans[*agent]),
                    &table,
                    profile.target_behavior,
                )
            });
            if envelope.forces(constraint) {
                forced += 1;
            }
        }
        if forced == branches.len() {
            return Some(conflict.clone());
        }
        if forced > 0 && half_forced.is_none() {
            half_forced = Some(conflict);
        }
    }
    half_forced.or_else(|| conflicts.first()).cloned()
}

/// Where one agent can be at each time step along *some* optimal plan under
/// its constraints: level `t` records the one cell the agent must stand on
/// at `t` when all optimal plans agree there, and `None` when they diverge.
/// A constraint is *forced* when every optimal plan violates it, which is
/// exactly when the branch replanning must return a costlier plan.
struct Envelope {
    /// Forced cell per time step, indexed `0..=cost`.
    per_level: Vec<Option<Vertex>>,
    cost: usize,
    /// Where the agent rests after its plan ends, if it keeps occupying it.
    parked: Option<Vertex>,
}

impl Envelope {
    fn build(
        grid: &Grid,
        source: Vertex,
        target: Vertex,
        cost: usize,
        table: &ConstraintTable,
        behavior: TargetBehavior,
    ) -> Self {
        let cells = grid.cell_count();
        // Forward reachability: which cells a constrained walk from the
        // source can occupy at each step.
        let mut forward: Vec<Vec<bool>> = Vec::with_capacity(cost + 1);
        let mut first = vec![false; cells];
        first[grid.index(source)] = true;
        forward.push(first);
        for time in 0..cost {
            let mut layer = vec![false; cells];
            for cell in 0..cells {
                if !forward[time][cell] {
                    continue;
                }
                let from = grid.vertex_at(cell);
                for to in std::iter::once(from).chain(grid.neighbors(from)) {
                    if table.vertex_blocked(to, time + 1)
                        || table.edge_blocked(from, to, time)
                    {
                        continue;
                    }
                    layer[grid.index(to)] = true;
                }
            }
            forward.push(layer);
        }
        // Backward reachability: from which cells the walk can still finish
        // on the target at exactly `cost`.
        let mut backward = vec![vec![false; cells]; cost + 1];
        backward[cost][grid.index(target)] = true;
        for time in (0..cost).rev() {
            for cell in 0..cells {
                let from = grid.vertex_at(cell);
                let viable = std::iter::once(from).chain(grid.neighbors(from)).any(|to| {
                    backward[time + 1][grid.index(to)]
                        && !table.vertex_blocked(to, time + 1)
                        && !table.edge_blocked(from, to, time)
                });
                backward[time][cell] = viable;
            }
        }
        let per_level = (0..=cost)
            .map(|time| {
                let mut only = None;
                for cell in 0..cells {
                    if forward[time][cell] && backward[time][cell] {
                        if only.is_some() {
                            return None;
                        }
                        only = Some(grid.vertex_at(cell));
                    }
                }
                only
            })
            .collect();
        let parked = (behavior == TargetBehavior::Stay).then_some(target);
        Envelope { per_level, cost, parked }
    }

    /// The cell every optimal plan stands on at `time`, if they agree.
    fn at(&self, time: usize) -> Option<Vertex> {
        if time <= self.cost {
            self.per_level[time]
        } else {
            self.parked
        }
    }

    fn forces(&self, constraint: &Constraint) -> bool {
        match *constraint {
            Constraint::Vertex { vertex, time } => self.at(time) == Some(vertex),
            Constraint::Edge { from, to, time } => {
                self.at(time) == Some(from) && self.at(time + 1) == Some(to)
            }
        }
    }
}

/// The constraints governing `agent` in the set formed by `parent`'s chain
/// plus an optionally `added` constraint.
fn agent_constraints(
    arena: &[Node],
    parent: Option<usize>,
    added: Option<(usize, Constraint)>,
    agent: usize,
) -> Vec<Constraint> {
    let mut constraints = Vec::new();
    if let Some((owner, constraint)) = added {
        if owner == agent {
            constraints.push(constraint);
        }
    }
    let mut cursor = parent;
    while let Some(index) = cursor {
        if let Some((owner, constraint)) = arena[index].constraint {
            if owner == agent {
                constraints.push(constraint);
            }
        }
        cursor = arena[index].parent;
    }
    constraints
}

/// The alternative single-agent constraints that rule out `conflict`. Any
/// plan pair (or ring) realizing the conflict violates all of them, and any
/// conflict-free solution satisfies at least one, so they form a sound and
/// exhaustive split.
fn branch_constraints(conflict: &Conflict) -> Vec<(usize, Constraint)> {
    let time = conflict.time;
    match conflict.kind {
        // Both agents occupy the cell at `time`; one of them must not.
        ConflictKind::Vertex => {
            let vertex = conflict.vertices[0];
            conflict
                .agents
                .iter()
                .map(|&agent| (agent, Constraint::Vertex { vertex, time }))
                .collect()
        }
        // Both agents make the same move over step `time` (including a
        // shared wait); one of them must skip it. A vertex constraint would
        // be too strong here: under a profile that forbids edge conflicts
        // but not vertex conflicts, agents may share the cell as long as
        // they then part ways.
        ConflictKind::Edge => {
            let from = conflict.vertices[0];
            let to = conflict.vertices[1];
            conflict
                .agents
                .iter()
                .map(|&agent| (agent, Constraint::Edge { from, to, time }))
                .collect()
        }
        // The follower enters the cell at `time + 1` exactly as the leader
        // leaves it at `time`; either the follower stays out of the cell at
        // `time + 1` or the leader is elsewhere at `time`.
        ConflictKind::Following => {
            let cell = conflict.vertices[0];
            vec![
                (conflict.agents[0], Constraint::Vertex { vertex: cell, time: time + 1 }),
                (conflict.agents[1], Constraint::Vertex { vertex: cell, time }),
            ]
        }
        // The agents exchange cells over step `time`; one of the two
        // opposite traversals must be dropped. (When the two cells coincide
        // — both agents waiting on one cell — each branch bans one agent's
        // wait there, which is still exhaustive.)
        ConflictKind::Swapping => {
            let here = conflict.vertices[0];
            let there = conflict.vertices[1];
            vec![
                (conflict.agents[0], Constraint::Edge { from: here, to: there, time }),
                (conflict.agents[1], Constraint::Edge { from: there, to: here, time }),
            ]
        }
        // A rotation survives only if every agent makes its move, so
        // banning any single traversal breaks it: one child per ring agent.
        ConflictKind::Cycle => {
            let ring = conflict.agents.len();
            (0..ring)
                .map(|position| {
                    (
                        conflict.agents[position],
                        Constraint::Edge {
                            from: conflict.vertices[position],
                            to: conflict.vertices[(position + 1) % ring],
                            time,
                        },
                    )
                })
                .collect()
        }
    }
}
