//! Core domain types: grids, instances, plans, solutions, and the semantics
//! profile that pins down which conflict types are forbidden.
//!
//! Time is discrete. At every time step an agent either waits or moves to an
//! adjacent cell, so a plan with `n` actions is a list of `n + 1` locations,
//! and `plan.locations[x]` is where the agent stands after its first `x`
//! actions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A cell of a grid, identified by zero-based `(x, y)` coordinates.
///
/// `x` grows to the right (column index), `y` grows downward (row index),
/// matching the coordinate order used by the benchmark scenario files.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    pub x: u32,
    pub y: u32,
}

impl Vertex {
    pub const fn new(x: u32, y: u32) -> Self {
        Vertex { x, y }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Shorthand used pervasively in tests.
pub const fn v(x: u32, y: u32) -> Vertex {
    Vertex::new(x, y)
}

/// Errors raised while building model values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    ZeroGridDimension { width: u32, height: u32 },
    #[error("blocked cell ({x}, {y}) lies outside the {width}x{height} grid")]
    BlockedCellOutOfBounds { x: u32, y: u32, width: u32, height: u32 },
    #[error("passable-cell table has {got} entries but the grid needs {needed}")]
    PassableTableSize { got: usize, needed: usize },
    #[error("neighborhood exponent must be between 2 and 5, got {0}")]
    NeighborhoodExponent(u32),
    #[error("a plan needs at least its starting location")]
    EmptyPlan,
    #[error("an instance needs at least one agent")]
    NoAgents,
    #[error("expected one target per source, got {sources} sources and {targets} targets")]
    AgentCountMismatch { sources: usize, targets: usize },
    #[error("agent {agent}: source {vertex} is blocked or out of bounds")]
    SourceNotPassable { agent: usize, vertex: Vertex },
    #[error("agent {agent}: target {vertex} is blocked or out of bounds")]
    TargetNotPassable { agent: usize, vertex: Vertex },
    #[error("agents {first} and {second} share the source {vertex}")]
    DuplicateSource { first: usize, second: usize, vertex: Vertex },
    #[error("agents {first} and {second} share the target {vertex}")]
    DuplicateTarget { first: usize, second: usize, vertex: Vertex },
    #[error("agent {agent}: no path exists from source {start} to target {goal}")]
    SourceTargetDisconnected { agent: usize, start: Vertex, goal: Vertex },
}

/// Sentinel distance for unreachable cells in [`Grid::bfs_distances`].
pub const UNREACHABLE: u32 = u32::MAX;

/// A rectangular grid of passable and blocked cells with 4-connected
/// (north/south/east/west) adjacency.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grid {
    width: u32,
    height: u32,
    passable: Vec<bool>,
}

impl Grid {
    /// Builds a grid from its dimensions and the set of blocked cells; every
    /// other cell is passable.
    pub fn new(
        width: u32,
        height: u32,
        blocked: &HashSet<(u32, u32)>,
    ) -> Result<Self, ModelError> {
        if width == 0 || height == 0 {
            return Err(ModelError::ZeroGridDimension { width, height });
        }
        let mut passable = vec![true; width as usize * height as usize];
        for &(x, y) in blocked {
            if x >= width || y >= height {
                return Err(ModelError::BlockedCellOutOfBounds { x, y, width, height });
            }
            passable[(y * width + x) as usize] = false;
        }
        Ok(Grid { width, height, passable })
    }

    /// Builds a grid from a row-major passable table (`true` = passable),
    /// as produced by the map file parser.
    pub fn from_passable(width: u32, height: u32, passable: Vec<bool>) -> Result<Self, ModelError> {
        if width == 0 || height == 0 {
            return Err(ModelError::ZeroGridDimension { width, height });
        }
        let needed = width as usize * height as usize;
        if passable.len() != needed {
            return Err(ModelError::PassableTableSize { got: passable.len(), needed });
        }
        Ok(Grid { width, height, passable })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Total number of cells, passable or not.
    pub fn cell_count(&self) -> usize {
        self.passable.len()
    }

    pub fn passable_count(&self) -> usize {
        self.passable.iter().filter(|&&p| p).count()
    }

    pub fn in_bounds(&self, vertex: Vertex) -> bool {
        vertex.x < self.width && vertex.y < self.height
    }

    /// True when the cell exists and is not blocked.
    pub fn is_passable(&self, vertex: Vertex) -> bool {
        self.in_bounds(vertex) && self.passable[self.index(vertex)]
    }

    /// Row-major index of an in-bounds vertex.
    pub fn index(&self, vertex: Vertex) -> usize {
        (vertex.y * self.width + vertex.x) as usize
    }

    /// Inverse of [`Grid::index`].
    pub fn vertex_at(&self, index: usize) -> Vertex {
        Vertex::new((index as u32) % self.width, (index as u32) / self.width)
    }

    /// The passable 4-neighbors of a cell, in deterministic
    /// east/south/west/north order.
    pub fn neighbors(&self, vertex: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        const STEPS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        STEPS.iter().filter_map(move |&(dx, dy)| {
            let nx = vertex.x as i64 + dx;
            let ny = vertex.y as i64 + dy;
            if nx < 0 || ny < 0 {
                return None;
            }
            let next = Vertex::new(nx as u32, ny as u32);
            self.is_passable(next).then_some(next)
        })
    }

    /// True when `a` and `b` are distinct passable cells one 4-step apart.
    pub fn are_adjacent(&self, a: Vertex, b: Vertex) -> bool {
        if !self.is_passable(a) || !self.is_passable(b) {
            return false;
        }
        let dx = a.x.abs_diff(b.x);
        let dy = a.y.abs_diff(b.y);
        dx + dy == 1
    }

    /// Breadth-first distances (in moves) from `from` to every cell, indexed
    /// by [`Grid::index`]; unreachable or blocked cells hold [`UNREACHABLE`].
    pub fn bfs_distances(&self, from: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.cell_count()];
        if !self.is_passable(from) {
            return dist;
        }
        let mut queue = std::collections::VecDeque::new();
        dist[self.index(from)] = 0;
        queue.push_back(from);
        while let Some(cur) = queue.pop_front() {
            let d = dist[self.index(cur)];
            for next in self.neighbors(cur) {
                let slot = &mut dist[self.index(next)];
                if *slot == UNREACHABLE {
                    *slot = d + 1;
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    /// Connected-component labels for every cell, indexed by [`Grid::index`].
    ///
    /// Passable cells get labels `0, 1, 2, ...` in row-major discovery order
    /// (so the component containing the row-major-smallest passable cell is
    /// labeled 0); blocked cells hold [`UNREACHABLE`].
    pub fn component_labels(&self) -> Vec<u32> {
        let mut labels = vec![UNREACHABLE; self.cell_count()];
        let mut next_label = 0;
        for start in 0..self.cell_count() {
            if !self.passable[start] || labels[start] != UNREACHABLE {
                continue;
            }
            let mut queue = std::collections::VecDeque::new();
            labels[start] = next_label;
            queue.push_back(self.vertex_at(start));
            while let Some(cur) = queue.pop_front() {
                for next in self.neighbors(cur) {
                    let slot = &mut labels[self.index(next)];
                    if *slot == UNREACHABLE {
                        *slot = next_label;
                        queue.push_back(next);
                    }
                }
            }
            next_label += 1;
        }
        labels
    }

    /// All passable vertices in row-major order.
    pub fn passable_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.cell_count()).filter(|&i| self.passable[i]).map(|i| self.vertex_at(i))
    }
}

/// One move offset of a neighborhood table, with its Euclidean cost.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Move {
    pub dx: i32,
    pub dy: i32,
    pub cost: f64,
}

/// The `2^k` grid neighborhood: the set of move offsets available to an
/// agent on a weighted grid, with Euclidean costs. Exponent 2 is the four
/// cardinal moves; each higher exponent doubles the number of headings.
///
/// These tables describe the weighted-grid benchmark data. The solvers in
/// this crate operate on the classical 4-connected, unit-cost model
/// (exponent 2).
#[derive(Clone, PartialEq, Debug)]
pub struct MoveTable {
    pub exponent: u32,
    pub moves: Vec<Move>,
}

/// Builds the `2^k` neighborhood move table for `k` in `2..=5`.
///
/// Starting from the cardinal offsets, each refinement inserts between every
/// pair of angularly adjacent offsets their vector sum, so exponent 3 adds
/// the diagonals (cost sqrt(2)) and exponent 4 adds the knight-like
/// `(±1, ±2)` / `(±2, ±1)` offsets (cost sqrt(5)). Offsets are listed in
/// counterclockwise angular order starting at `(1, 0)`.
pub fn neighborhood_moves(k: u32) -> Result<MoveTable, ModelError> {
    if !(2..=5).contains(&k) {
        return Err(ModelError::NeighborhoodExponent(k));
    }
    let mut offsets: Vec<(i32, i32)> = vec![(1, 0), (0, 1), (-1, 0), (0, -1)];
    for _ in 2..k {
        let mut refined = Vec::with_capacity(offsets.len() * 2);
        for i in 0..offsets.len() {
            let (ax, ay) = offsets[i];
            let (bx, by) = offsets[(i + 1) % offsets.len()];
            refined.push((ax, ay));
            refined.push((ax + bx, ay + by));
        }
        offsets = refined;
    }
    let moves = offsets
        .into_iter()
        .map(|(dx, dy)| Move {
            dx,
            dy,
            cost: ((dx as f64).powi(2) + (dy as f64).powi(2)).sqrt(),
        })
        .collect();
    Ok(MoveTable { exponent: k, moves })
}

/// What an agent does after completing its plan.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TargetBehavior {
    /// The agent keeps occupying its target forever.
    Stay,
    /// The agent vanishes: beyond its plan it occupies nothing and can no
    /// longer participate in any conflict.
    Disappear,
}

impl FromStr for TargetBehavior {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stay" => Ok(TargetBehavior::Stay),
            "disappear" => Ok(TargetBehavior::Disappear),
            other => Err(format!("unknown target behavior '{other}' (expected stay|disappear)")),
        }
    }
}

/// The objective a solver minimizes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Objective {
    Makespan,
    SumOfCosts,
}

/// The five conflict types between plans.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ConflictKind {
    /// Two agents occupy the same vertex at the same time step.
    Vertex,
    /// Two agents occupy the same vertex at time `x` and again the same
    /// vertex at time `x + 1`.
    Edge,
    /// One agent moves into the vertex another agent occupied one step
    /// earlier.
    Following,
    /// Two or more agents rotate positions in one step: each moves into the
    /// vertex the next agent of the ring just vacated.
    Cycle,
    /// Two agents exchange vertices in one step (a two-agent rotation).
    Swapping,
}

impl ConflictKind {
    pub const ALL: [ConflictKind; 5] = [
        ConflictKind::Vertex,
        ConflictKind::Edge,
        ConflictKind::Following,
        ConflictKind::Cycle,
        ConflictKind::Swapping,
    ];

    fn bit(self) -> u8 {
        match self {
            ConflictKind::Vertex => 1,
            ConflictKind::Edge => 1 << 1,
            ConflictKind::Following => 1 << 2,
            ConflictKind::Cycle => 1 << 3,
            ConflictKind::Swapping => 1 << 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConflictKind::Vertex => "vertex",
            ConflictKind::Edge => "edge",
            ConflictKind::Following => "following",
            ConflictKind::Cycle => "cycle",
            ConflictKind::Swapping => "swapping",
        }
    }
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConflictKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vertex" => Ok(ConflictKind::Vertex),
            "edge" => Ok(ConflictKind::Edge),
            "following" => Ok(ConflictKind::Following),
            "cycle" => Ok(ConflictKind::Cycle),
            "swapping" => Ok(ConflictKind::Swapping),
            other => Err(format!(
                "unknown conflict kind '{other}' (expected vertex|edge|following|cycle|swapping)"
            )),
        }
    }
}

/// Which conflicts are forbidden, what agents do at their targets, and which
/// objective is minimized. Together these pin down one member of the family
/// of classical MAPF problem variants.
///
/// The forbidden set is kept closed under the dominance rules between
/// conflict types:
///
/// * forbidding vertex conflicts also forbids edge conflicts,
/// * forbidding following conflicts also forbids cycle and swapping
///   conflicts,
/// * forbidding cycle conflicts also forbids swapping conflicts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SemanticsProfile {
    forbidden: u8,
    pub target_behavior: TargetBehavior,
    pub objective: Objective,
}

impl SemanticsProfile {
    /// Builds a profile, closing `forbidden` under the dominance rules. The
    /// closure is idempotent: feeding a profile's forbidden set back in
    /// yields the same profile.
    pub fn new(
        forbidden: impl IntoIterator<Item = ConflictKind>,
        target_behavior: TargetBehavior,
        objective: Objective,
    ) -> Self {
        let mut mask = 0u8;
        for kind in forbidden {
            mask |= kind.bit();
        }
        if mask & ConflictKind::Vertex.bit() != 0 {
            mask |= ConflictKind::Edge.bit();
        }
        if mask & ConflictKind::Following.bit() != 0 {
            mask |= ConflictKind::Cycle.bit() | ConflictKind::Swapping.bit();
        }
        if mask & ConflictKind::Cycle.bit() != 0 {
            mask |= ConflictKind::Swapping.bit();
        }
        SemanticsProfile { forbidden: mask, target_behavior, objective }
    }

    /// The profile used by the search-based solvers in this crate: vertex,
    /// edge, and swapping conflicts forbidden; following and cycle conflicts
    /// allowed; agents stay at their targets; sum-of-costs objective.
    pub fn search_based() -> Self {
        SemanticsProfile::new(
            [ConflictKind::Vertex, ConflictKind::Edge, ConflictKind::Swapping],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        )
    }

    /// The strictest classical profile: forbidding following conflicts
    /// closes the set to all five conflict types.
    pub fn pebble_motion() -> Self {
        SemanticsProfile::new(
            [ConflictKind::Vertex, ConflictKind::Following],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        )
    }

    pub fn is_forbidden(&self, kind: ConflictKind) -> bool {
        self.forbidden & kind.bit() != 0
    }

    /// The forbidden kinds in declaration order of [`ConflictKind::ALL`].
    pub fn forbidden_kinds(&self) -> Vec<ConflictKind> {
        ConflictKind::ALL.iter().copied().filter(|&k| self.is_forbidden(k)).collect()
    }

    pub fn with_target_behavior(mut self, target_behavior: TargetBehavior) -> Self {
        self.target_behavior = target_behavior;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }
}

/// A MAPF instance: a grid plus one source and one target per agent.
///
/// Construction enforces that sources are pairwise distinct, targets are
/// pairwise distinct, every endpoint is passable, and each agent's source
/// and target lie in the same connected component. An agent whose source
/// equals its target is allowed; its optimal plan has zero actions.
#[derive(Clone, Debug)]
pub struct Instance {
    grid: Grid,
    sources: Vec<Vertex>,
    targets: Vec<Vertex>,
}

impl Instance {
    pub fn new(grid: Grid, sources: Vec<Vertex>, targets: Vec<Vertex>) -> Result<Self, ModelError> {
        if sources.is_empty() {
            return Err(ModelError::NoAgents);
        }
        if sources.len() != targets.len() {
            return Err(ModelError::AgentCountMismatch {
                sources: sources.len(),
                targets: targets.len(),
            });
        }
        for (agent, &s) in sources.iter().enumerate() {
            if !grid.is_passable(s) {
                return Err(ModelError::SourceNotPassable { agent, vertex: s });
            }
        }
        for (agent, &t) in targets.iter().enumerate() {
            if !grid.is_passable(t) {
                return Err(ModelError::TargetNotPassable { agent, vertex: t });
            }
        }
        let mut seen = std::collections::HashMap::new();
        for (agent, &s) in sources.iter().enumerate() {
            if let Some(&first) = seen.get(&s) {
                return Err(ModelError::DuplicateSource { first, second: agent, vertex: s });
            }
            seen.insert(s, agent);
        }
        seen.clear();
        for (agent, &t) in targets.iter().enumerate() {
            if let Some(&first) = seen.get(&t) {
                return Err(ModelError::DuplicateTarget { first, second: agent, vertex: t });
            }
            seen.insert(t, agent);
        }
        let labels = grid.component_labels();
        for agent in 0..sources.len() {
            let s = sources[agent];
            let t = targets[agent];
            if labels[grid.index(s)] != labels[grid.index(t)] {
                return Err(ModelError::SourceTargetDisconnected { agent, start: s, goal: t });
            }
        }
        Ok(Instance { grid, sources, targets })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn agent_count(&self) -> usize {
        self.sources.len()
    }

    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn source(&self, agent: usize) -> Vertex {
        self.sources[agent]
    }

    pub fn target(&self, agent: usize) -> Vertex {
        self.targets[agent]
    }
}

/// A single agent's plan: the locations it occupies after `0, 1, 2, ...`
/// actions. A plan with `n` actions stores `n + 1` locations.
///
/// The container itself accepts any non-empty location sequence so that
/// validation can inspect malformed input; [`Plan::is_walk_on`] replays the
/// plan against a grid to check that every step is a legal wait or move.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Plan {
    pub locations: Vec<Vertex>,
}

impl Plan {
    pub fn new(locations: Vec<Vertex>) -> Result<Self, ModelError> {
        if locations.is_empty() {
            return Err(ModelError::EmptyPlan);
        }
        Ok(Plan { locations })
    }

    /// Number of actions, i.e. one less than the number of stored locations.
    pub fn action_count(&self) -> usize {
        self.locations.len() - 1
    }

    pub fn start(&self) -> Vertex {
        self.locations[0]
    }

    pub fn final_location(&self) -> Vertex {
        *self.locations.last().expect("plans are never empty")
    }

    /// Where the agent is after `x` actions. Beyond the plan's end the
    /// answer depends on the target behavior: a staying agent keeps its
    /// final location forever, a disappearing agent is absent (`None`).
    pub fn location_at(&self, x: usize, behavior: TargetBehavior) -> Option<Vertex> {
        if x < self.locations.len() {
            return Some(self.locations[x]);
        }
        match behavior {
            TargetBehavior::Stay => Some(self.final_location()),
            TargetBehavior::Disappear => None,
        }
    }

    /// True when every consecutive pair of locations is a wait or a legal
    /// move on `grid` and every visited cell is passable.
    pub fn is_walk_on(&self, grid: &Grid) -> bool {
        self.locations.iter().all(|&loc| grid.is_passable(loc))
            && self
                .locations
                .windows(2)
                .all(|w| w[0] == w[1] || grid.are_adjacent(w[0], w[1]))
    }

    /// True when the plan carries no trailing run of waits at its final
    /// location (its last action, if any, arrives somewhere new).
    pub fn is_canonical(&self) -> bool {
        let n = self.locations.len();
        n < 2 || self.locations[n - 2] != self.locations[n - 1]
    }

    /// The canonical form: trailing waits at the final location removed.
    /// A plan that only ever waits canonicalizes to zero actions.
    pub fn canonical(&self) -> Plan {
        let mut locations = self.locations.clone();
        while locations.len() >= 2 && locations[locations.len() - 2] == locations[locations.len() - 1]
        {
            locations.pop();
        }
        Plan { locations }
    }
}

/// One plan per agent, in agent order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution {
    pub plans: Vec<Plan>,
}

impl Solution {
    pub fn new(plans: Vec<Plan>) -> Self {
        Solution { plans }
    }

    pub fn agent_count(&self) -> usize {
        self.plans.len()
    }

    /// Canonicalizes every plan.
    pub fn canonical(&self) -> Solution {
        Solution { plans: self.plans.iter().map(Plan::canonical).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocked(cells: &[(u32, u32)]) -> HashSet<(u32, u32)> {
        cells.iter().copied().collect()
    }

    #[test]
    fn corridor_grid_has_expected_adjacency() {
        let grid = Grid::new(3, 1, &blocked(&[])).unwrap();
        assert_eq!(grid.passable_count(), 3);
        assert!(grid.are_adjacent(v(0, 0), v(1, 0)));
        assert!(grid.are_adjacent(v(1, 0), v(2, 0)));
        assert!(!grid.are_adjacent(v(0, 0), v(2, 0)));
    }

    #[test]
    fn blocking_the_middle_breaks_adjacency() {
        let grid = Grid::new(3, 1, &blocked(&[(1, 0)])).unwrap();
        assert_eq!(grid.passable_count(), 2);
        assert!(!grid.is_passable(v(1, 0)));
        assert!(!grid.are_adjacent(v(0, 0), v(1, 0)));
        assert!(!grid.are_adjacent(v(0, 0), v(2, 0)));
        assert_eq!(grid.neighbors(v(0, 0)).count(), 0);
    }

    #[test]
    fn fully_blocked_grid_is_legal() {
        let grid = Grid::new(2, 2, &blocked(&[(0, 0), (0, 1), (1, 0), (1, 1)])).unwrap();
        assert_eq!(grid.passable_count(), 0);
    }

    #[test]
    fn out_of_bounds_blocked_cell_is_rejected() {
        let err = Grid::new(2, 2, &blocked(&[(2, 0)])).unwrap_err();
        assert_eq!(
            err,
            ModelError::BlockedCellOutOfBounds { x: 2, y: 0, width: 2, height: 2 }
        );
    }

    #[test]
    fn zero_dimension_grids_are_rejected() {
        assert!(matches!(
            Grid::new(0, 5, &blocked(&[])),
            Err(ModelError::ZeroGridDimension { .. })
        ));
        assert!(matches!(
            Grid::new(5, 0, &blocked(&[])),
            Err(ModelError::ZeroGridDimension { .. })
        ));
    }

    #[test]
    fn bfs_distances_measure_detours() {
        // 3x3 with the center blocked: the way from (0, 1) to (2, 1) wraps
        // around the top or bottom row.
        let grid = Grid::new(3, 3, &blocked(&[(1, 1)])).unwrap();
        let dist = grid.bfs_distances(v(0, 1));
        assert_eq!(dist[grid.index(v(2, 1))], 4);
        assert_eq!(dist[grid.index(v(0, 1))], 0);
        assert_eq!(dist[grid.index(v(1, 1))], UNREACHABLE);
    }

    #[test]
    fn component_labels_split_disconnected_regions() {
        // A vertical wall at x = 1 splits a 3x2 grid into two columns.
        let grid = Grid::new(3, 2, &blocked(&[(1, 0), (1, 1)])).unwrap();
        let labels = grid.component_labels();
        assert_eq!(labels[grid.index(v(0, 0))], labels[grid.index(v(0, 1))]);
        assert_eq!(labels[grid.index(v(2, 0))], labels[grid.index(v(2, 1))]);
        assert_ne!(labels[grid.index(v(0, 0))], labels[grid.index(v(2, 0))]);
        assert_eq!(labels[grid.index(v(1, 0))], UNREACHABLE);
    }

    #[test]
    fn cardinal_moves_have_unit_cost() {
        let table = neighborhood_moves(2).unwrap();
        assert_eq!(table.moves.len(), 4);
        let offsets: HashSet<(i32, i32)> = table.moves.iter().map(|m| (m.dx, m.dy)).collect();
        assert_eq!(offsets, [(1, 0), (0, 1), (-1, 0), (0, -1)].into_iter().collect());
        assert!(table.moves.iter().all(|m| m.cost == 1.0));
    }

    #[test]
    fn octile_moves_add_diagonals_at_sqrt2() {
        let table = neighborhood_moves(3).unwrap();
        assert_eq!(table.moves.len(), 8);
        let diag_cost = table
            .moves
            .iter()
            .find(|m| (m.dx, m.dy) == (1, 1))
            .expect("diagonal offset present")
            .cost;
        assert!((diag_cost - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exponent_four_adds_knight_offsets_at_sqrt5() {
        let table = neighborhood_moves(4).unwrap();
        assert_eq!(table.moves.len(), 16);
        let offsets: HashSet<(i32, i32)> = table.moves.iter().map(|m| (m.dx, m.dy)).collect();
        let mut expected: HashSet<(i32, i32)> =
            neighborhood_moves(3).unwrap().moves.iter().map(|m| (m.dx, m.dy)).collect();
        for &(dx, dy) in &[(1, 2), (2, 1)] {
            for sx in [-1, 1] {
                for sy in [-1, 1] {
                    expected.insert((dx * sx, dy * sy));
                }
            }
        }
        assert_eq!(offsets, expected);
        for m in &table.moves {
            if m.dx.abs() + m.dy.abs() == 3 {
                assert!((m.cost - 5f64.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn each_exponent_extends_the_previous_offsets() {
        for k in 3..=5 {
            let prev: HashSet<(i32, i32)> =
                neighborhood_moves(k - 1).unwrap().moves.iter().map(|m| (m.dx, m.dy)).collect();
            let table = neighborhood_moves(k).unwrap();
            let cur: HashSet<(i32, i32)> = table.moves.iter().map(|m| (m.dx, m.dy)).collect();
            assert_eq!(table.moves.len(), 1 << k);
            assert_eq!(cur.len(), table.moves.len(), "offsets must be distinct");
            assert!(prev.is_subset(&cur));
            assert!(table.moves.iter().all(|m| (m.dx, m.dy) != (0, 0)));
            assert!(table.moves.iter().all(|m| m.cost > 0.0));
        }
    }

    #[test]
    fn neighborhood_exponent_is_range_checked() {
        assert_eq!(neighborhood_moves(1).unwrap_err(), ModelError::NeighborhoodExponent(1));
        assert_eq!(neighborhood_moves(6).unwrap_err(), ModelError::NeighborhoodExponent(6));
    }

    #[test]
    fn location_at_follows_the_plan_then_the_target_behavior() {
        let plan = Plan::new(vec![v(0, 0), v(1, 0), v(1, 1)]).unwrap();
        assert_eq!(plan.location_at(1, TargetBehavior::Stay), Some(v(1, 0)));
        assert_eq!(plan.location_at(7, TargetBehavior::Stay), Some(v(1, 1)));
        assert_eq!(plan.location_at(7, TargetBehavior::Disappear), None);
        assert_eq!(plan.location_at(2, TargetBehavior::Disappear), Some(v(1, 1)));
    }

    #[test]
    fn canonical_strips_trailing_waits_only() {
        let padded = Plan::new(vec![v(0, 0), v(1, 0), v(1, 0), v(1, 0)]).unwrap();
        assert!(!padded.is_canonical());
        let canon = padded.canonical();
        assert_eq!(canon.locations, vec![v(0, 0), v(1, 0)]);
        assert!(canon.is_canonical());

        // A mid-plan wait at the final vertex survives: only the trailing
        // run is removed.
        let leaves_and_returns =
            Plan::new(vec![v(0, 0), v(1, 0), v(0, 0), v(1, 0), v(1, 0)]).unwrap();
        assert_eq!(
            leaves_and_returns.canonical().locations,
            vec![v(0, 0), v(1, 0), v(0, 0), v(1, 0)]
        );

        let waits_forever = Plan::new(vec![v(2, 2), v(2, 2), v(2, 2)]).unwrap();
        assert_eq!(waits_forever.canonical().locations, vec![v(2, 2)]);
        assert_eq!(waits_forever.canonical().action_count(), 0);
    }

    #[test]
    fn plan_replay_checks_waits_moves_and_passability() {
        let grid = Grid::new(3, 1, &blocked(&[])).unwrap();
        let ok = Plan::new(vec![v(0, 0), v(0, 0), v(1, 0), v(2, 0)]).unwrap();
        assert!(ok.is_walk_on(&grid));
        let teleports = Plan::new(vec![v(0, 0), v(2, 0)]).unwrap();
        assert!(!teleports.is_walk_on(&grid));
        let wall = Grid::new(3, 1, &blocked(&[(1, 0)])).unwrap();
        let through_wall = Plan::new(vec![v(0, 0), v(1, 0), v(2, 0)]).unwrap();
        assert!(!through_wall.is_walk_on(&wall));
    }

    #[test]
    fn profile_normalization_closes_dominance() {
        let p = SemanticsProfile::new(
            [ConflictKind::Vertex],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        );
        assert!(p.is_forbidden(ConflictKind::Vertex));
        assert!(p.is_forbidden(ConflictKind::Edge));
        assert!(!p.is_forbidden(ConflictKind::Following));
        assert!(!p.is_forbidden(ConflictKind::Swapping));

        let q = SemanticsProfile::new(
            [ConflictKind::Following],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        );
        assert!(q.is_forbidden(ConflictKind::Following));
        assert!(q.is_forbidden(ConflictKind::Cycle));
        assert!(q.is_forbidden(ConflictKind::Swapping));
        assert!(!q.is_forbidden(ConflictKind::Vertex));

        let r = SemanticsProfile::new(
            [ConflictKind::Cycle],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        );
        assert!(r.is_forbidden(ConflictKind::Swapping));
    }

    #[test]
    fn profile_normalization_is_idempotent() {
        for bits in 0..32u8 {
            let kinds: Vec<ConflictKind> = ConflictKind::ALL
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| bits & (1 << i) != 0)
                .map(|(_, k)| k)
                .collect();
            let once =
                SemanticsProfile::new(kinds, TargetBehavior::Stay, Objective::SumOfCosts);
            let twice = SemanticsProfile::new(
                once.forbidden_kinds(),
                TargetBehavior::Stay,
                Objective::SumOfCosts,
            );
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn search_based_profile_allows_following_and_cycles() {
        let p = SemanticsProfile::search_based();
        assert!(p.is_forbidden(ConflictKind::Vertex));
        assert!(p.is_forbidden(ConflictKind::Edge));
        assert!(p.is_forbidden(ConflictKind::Swapping));
        assert!(!p.is_forbidden(ConflictKind::Following));
        assert!(!p.is_forbidden(ConflictKind::Cycle));
        assert_eq!(p.target_behavior, TargetBehavior::Stay);
        assert_eq!(p.objective, Objective::SumOfCosts);

        let q = SemanticsProfile::pebble_motion();
        assert!(ConflictKind::ALL.iter().all(|&k| q.is_forbidden(k)));
    }

    #[test]
    fn instance_construction_enforces_endpoint_invariants() {
        let grid = Grid::new(3, 3, &blocked(&[])).unwrap();

        let dup_source = Instance::new(
            grid.clone(),
            vec![v(0, 0), v(0, 0)],
            vec![v(1, 0), v(2, 0)],
        );
        assert_eq!(
            dup_source.unwrap_err(),
            ModelError::DuplicateSource { first: 0, second: 1, vertex: v(0, 0) }
        );

        let dup_target =
            Instance::new(grid.clone(), vec![v(0, 0), v(1, 0)], vec![v(2, 2), v(2, 2)]);
        assert_eq!(
            dup_target.unwrap_err(),
            ModelError::DuplicateTarget { first: 0, second: 1, vertex: v(2, 2) }
        );

        let mismatch = Instance::new(grid.clone(), vec![v(0, 0)], vec![v(1, 0), v(2, 0)]);
        assert!(matches!(mismatch.unwrap_err(), ModelError::AgentCountMismatch { .. }));

        let empty = Instance::new(grid.clone(), vec![], vec![]);
        assert_eq!(empty.unwrap_err(), ModelError::NoAgents);

        // Source equal to target is fine; the agent just never moves.
        let trivial = Instance::new(grid, vec![v(1, 1)], vec![v(1, 1)]).unwrap();
        assert_eq!(trivial.agent_count(), 1);
    }

    #[test]
    fn instance_rejects_disconnected_endpoints() {
        let grid = Grid::new(3, 1, &blocked(&[(1, 0)])).unwrap();
        let err = Instance::new(grid, vec![v(0, 0)], vec![v(2, 0)]).unwrap_err();
        assert_eq!(
            err,
            ModelError::SourceTargetDisconnected { agent: 0, start: v(0, 0), goal: v(2, 0) }
        );
    }

    #[test]
    fn instance_rejects_blocked_endpoints() {
        let grid = Grid::new(3, 1, &blocked(&[(1, 0)])).unwrap();
        assert!(matches!(
            Instance::new(grid.clone(), vec![v(1, 0)], vec![v(2, 0)]).unwrap_err(),
            ModelError::SourceNotPassable { agent: 0, .. }
        ));
        assert!(matches!(
            Instance::new(grid, vec![v(0, 0)], vec![v(5, 0)]).unwrap_err(),
            ModelError::TargetNotPassable { agent: 0, .. }
        ));
    }
}
