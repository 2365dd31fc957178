//! Benchmark file formats and scenario generation.
//!
//! Three textual formats, all newline-terminated and line-oriented:
//!
//! * **Map files**: a `type octile` / `height H` / `width W` / `map` header
//!   followed by `H` rows of `W` characters. `.`, `G`, and `S` are passable;
//!   `@`, `O`, `T`, and `W` are blocked. Serialization emits the canonical
//!   characters `.` and `@`.
//! * **Scenario files**: a `version 1` header, then one tab-separated entry
//!   per line: bucket, map name, map width, map height, start x, start y,
//!   goal x, goal y, and an informational optimal path length under octile
//!   (8-neighbor) movement, printed with eight decimals.
//! * **Solution files**: one line per agent of whitespace-separated `x,y`
//!   locations; lines beginning with `#` are comments.
//!
//! Parsing is strict and every parse error names the offending line.

use std::collections::BinaryHeap;
use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Grid, Instance, ModelError, Plan, Solution, Vertex, UNREACHABLE};

/// A parse failure, tagged with the 1-based line it occurred on.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// One start/goal pair of a scenario file.
#[derive(Clone, PartialEq, Debug)]
pub struct ScenarioEntry {
    /// Grouping integer carried in the file; not interpreted.
    pub bucket: u32,
    pub map_name: String,
    pub map_width: u32,
    pub map_height: u32,
    pub start: Vertex,
    pub goal: Vertex,
    /// Shortest octile path length between start and goal; informational
    /// only, carried through but never trusted.
    pub optimal_length: f64,
}

/// A parsed scenario file: an ordered list of start/goal pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct Scenario {
    pub version: String,
    pub entries: Vec<ScenarioEntry>,
}

// ---------------------------------------------------------------------------
// Map files
// ---------------------------------------------------------------------------

/// Parses map file text into a grid.
pub fn parse_map(text: &str) -> Result<Grid, ParseError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let mut line_no = 0;
    let mut next_line = |expect: &str| {
        line_no += 1;
        lines.next().ok_or_else(|| {
            ParseError::new(line_no, format!("unexpected end of file, expected {expect}"))
        })
    };

    let type_line = next_line("'type octile'")?;
    if type_line.trim() != "type octile" {
        return Err(ParseError::new(1, format!("expected 'type octile', got '{type_line}'")));
    }
    let height_line = next_line("'height H'")?;
    let height: u32 = parse_header_field(height_line, "height", 2)?;
    let width_line = next_line("'width W'")?;
    let width: u32 = parse_header_field(width_line, "width", 3)?;
    let map_line = next_line("'map'")?;
    if map_line.trim() != "map" {
        return Err(ParseError::new(4, format!("expected 'map', got '{map_line}'")));
    }
    if height == 0 || width == 0 {
        return Err(ParseError::new(2, format!("dimensions must be positive, got {width}x{height}")));
    }

    let mut passable = Vec::with_capacity(width as usize * height as usize);
    for row in 0..height {
        let line_no = 5 + row as usize;
        let row_text = next_line("a map row")?;
        if row_text.chars().count() != width as usize {
            return Err(ParseError::new(
                line_no,
                format!("map row has {} characters, expected {width}", row_text.chars().count()),
            ));
        }
        for (col, ch) in row_text.chars().enumerate() {
            match ch {
                '.' | 'G' | 'S' => passable.push(true),
                '@' | 'O' | 'T' | 'W' => passable.push(false),
                other => {
                    return Err(ParseError::new(
                        line_no,
                        format!("unknown map character '{other}' in column {}", col + 1),
                    ));
                }
            }
        }
    }
    let extra = lines.filter(|l| !l.trim().is_empty()).count();
    if extra > 0 {
        return Err(ParseError::new(
            5 + height as usize,
            format!("expected {height} map rows, found {extra} extra non-empty lines"),
        ));
    }
    Grid::from_passable(width, height, passable)
        .map_err(|e| ParseError::new(2, e.to_string()))
}

fn parse_header_field(line: &str, key: &str, line_no: usize) -> Result<u32, ParseError> {
    let rest = line
        .trim()
        .strip_prefix(key)
        .ok_or_else(|| ParseError::new(line_no, format!("expected '{key} N', got '{line}'")))?;
    rest.trim()
        .parse()
        .map_err(|_| ParseError::new(line_no, format!("cannot parse {key} value from '{line}'")))
}

/// Renders a grid in canonical map file form (`.` passable, `@` blocked).
pub fn serialize_map(grid: &Grid) -> String {
    let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", grid.height(), grid.width());
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            out.push(if grid.is_passable(Vertex::new(x, y)) { '.' } else { '@' });
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

/// Parses scenario file text.
pub fn parse_scen(text: &str) -> Result<Scenario, ParseError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate();
    let (_, version_line) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty file, expected 'version 1' header"))?;
    if version_line.trim() != "version 1" {
        return Err(ParseError::new(1, format!("expected 'version 1', got '{version_line}'")));
    }
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        entries.push(parse_scen_entry(line, line_no)?);
    }
    Ok(Scenario { version: "1".to_owned(), entries })
}

fn parse_scen_entry(line: &str, line_no: usize) -> Result<ScenarioEntry, ParseError> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 9 {
        return Err(ParseError::new(
            line_no,
            format!("expected 9 tab-separated fields, got {}", fields.len()),
        ));
    }
    let num = |idx: usize, what: &str| -> Result<u32, ParseError> {
        fields[idx].trim().parse().map_err(|_| {
            ParseError::new(line_no, format!("cannot parse {what} from '{}'", fields[idx]))
        })
    };
    let bucket = num(0, "bucket")?;
    let map_name = fields[1].to_owned();
    let map_width = num(2, "map width")?;
    let map_height = num(3, "map height")?;
    let start = Vertex::new(num(4, "start x")?, num(5, "start y")?);
    let goal = Vertex::new(num(6, "goal x")?, num(7, "goal y")?);
    let optimal_length: f64 = fields[8].trim().parse().map_err(|_| {
        ParseError::new(line_no, format!("cannot parse optimal length from '{}'", fields[8]))
    })?;
    if !optimal_length.is_finite() || optimal_length < 0.0 {
        return Err(ParseError::new(
            line_no,
            format!("optimal length must be a nonnegative number, got {optimal_length}"),
        ));
    }
    for (what, v) in [("start", start), ("goal", goal)] {
        if v.x >= map_width || v.y >= map_height {
            return Err(ParseError::new(
                line_no,
                format!("{what} {v} outside declared {map_width}x{map_height} dimensions"),
            ));
        }
    }
    Ok(ScenarioEntry { bucket, map_name, map_width, map_height, start, goal, optimal_length })
}

/// Renders a scenario in canonical form: tab separators, eight-decimal
/// optimal lengths, trailing newline.
pub fn serialize_scen(scenario: &Scenario) -> String {
    let mut out = String::from("version 1\n");
    for e in &scenario.entries {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.8}\n",
            e.bucket,
            e.map_name,
            e.map_width,
            e.map_height,
            e.start.x,
            e.start.y,
            e.goal.x,
            e.goal.y,
            e.optimal_length,
        ));
    }
    out
}

/// Builds the instance formed by the first `n` entries of a scenario:
/// starts become sources, goals become targets.
pub fn scenario_instance(
    grid: &Grid,
    scenario: &Scenario,
    n: usize,
) -> Result<Instance, ScenarioInstanceError> {
    if n == 0 || n > scenario.entries.len() {
        return Err(ScenarioInstanceError::NotEnoughEntries {
            available: scenario.entries.len(),
            requested: n,
        });
    }
    let sources = scenario.entries[..n].iter().map(|e| e.start).collect();
    let targets = scenario.entries[..n].iter().map(|e| e.goal).collect();
    Ok(Instance::new(grid.clone(), sources, targets)?)
}

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioInstanceError {
    #[error("scenario provides {available} entries but {requested} agents were requested")]
    NotEnoughEntries { available: usize, requested: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

// ---------------------------------------------------------------------------
// Reachability and generation
// ---------------------------------------------------------------------------

/// The largest 4-connected component of passable cells, in row-major order.
/// Ties between equal-sized components go to the one whose first cell in
/// row-major order comes first.
pub fn largest_reachable_region(grid: &Grid) -> Vec<Vertex> {
    let labels = grid.component_labels();
    let component_count = labels.iter().filter(|&&l| l != UNREACHABLE).max().map_or(0, |&m| m as usize + 1);
    if component_count == 0 {
        return Vec::new();
    }
    let mut sizes = vec![0usize; component_count];
    for &l in &labels {
        if l != UNREACHABLE {
            sizes[l as usize] += 1;
        }
    }
    // Labels are assigned in row-major discovery order, so on a size tie the
    // smallest label is the component seen first.
    let best = (0..component_count).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))).unwrap();
    (0..grid.cell_count())
        .filter(|&i| labels[i] == best as u32)
        .map(|i| grid.vertex_at(i))
        .collect()
}

/// How [`generate_scenario`] picks start/goal pools.
#[derive(Clone, PartialEq, Debug)]
pub enum ScenarioMode {
    /// Starts and goals drawn from the largest reachable region.
    Random,
    /// The first agent's start and goal anchor the scenario; remaining
    /// starts are drawn within `radius` moves of the first start, goals
    /// within `radius` moves of the first goal.
    Clustered { radius: u32 },
    /// Starts drawn from `sources`, goals drawn from `targets`.
    Designated { sources: Vec<Vertex>, targets: Vec<Vertex> },
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("cannot generate a scenario for zero agents")]
    ZeroAgents,
    #[error("{role} pool has only {available} eligible cells, need {needed}")]
    Capacity { role: &'static str, needed: usize, available: usize },
    #[error("designated cell {0} is blocked or out of bounds")]
    DesignatedNotPassable(Vertex),
    #[error("designated cells {0} and {1} lie in different connected components")]
    DesignatedDisconnected(Vertex, Vertex),
}

/// Generates an `n`-agent scenario deterministically from a seed: the same
/// grid, mode, and seed always produce the same scenario. Starts are
/// pairwise distinct, goals are pairwise distinct, and every start/goal pair
/// is connected.
pub fn generate_scenario(
    grid: &Grid,
    map_name: &str,
    n: usize,
    mode: &ScenarioMode,
    seed: u64,
) -> Result<Scenario, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroAgents);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (starts, goals) = match mode {
        ScenarioMode::Random => {
            let region = largest_reachable_region(grid);
            check_capacity("start", n, region.len())?;
            let starts = sample_distinct(&mut rng, &region, n);
            let goals = sample_distinct(&mut rng, &region, n);
            (starts, goals)
        }
        ScenarioMode::Clustered { radius } => {
            let region = largest_reachable_region(grid);
            check_capacity("start", 1, region.len())?;
            let anchor_start = region[rng.gen_range(0..region.len())];
            let anchor_goal = region[rng.gen_range(0..region.len())];
            let start_pool = ball(grid, anchor_start, *radius);
            let goal_pool = ball(grid, anchor_goal, *radius);
            check_capacity("start", n, start_pool.len())?;
            check_capacity("goal", n, goal_pool.len())?;
            let starts = sample_anchored(&mut rng, anchor_start, &start_pool, n);
            let goals = sample_anchored(&mut rng, anchor_goal, &goal_pool, n);
            (starts, goals)
        }
        ScenarioMode::Designated { sources, targets } => {
            let sources = dedup_cells(sources);
            let targets = dedup_cells(targets);
            let labels = grid.component_labels();
            let mut shared_label = None;
            for &cell in sources.iter().chain(targets.iter()) {
                if !grid.is_passable(cell) {
                    return Err(GenerateError::DesignatedNotPassable(cell));
                }
                let label = labels[grid.index(cell)];
                match shared_label {
                    None => shared_label = Some((cell, label)),
                    Some((first, l)) if l != label => {
                        return Err(GenerateError::DesignatedDisconnected(first, cell));
                    }
                    _ => {}
                }
            }
            check_capacity("start", n, sources.len())?;
            check_capacity("goal", n, targets.len())?;
            let starts = sample_distinct(&mut rng, &sources, n);
            let goals = sample_distinct(&mut rng, &targets, n);
            (starts, goals)
        }
    };

    let entries = starts
        .into_iter()
        .zip(goals)
        .map(|(start, goal)| ScenarioEntry {
            bucket: 0,
            map_name: map_name.to_owned(),
            map_width: grid.width(),
            map_height: grid.height(),
            start,
            goal,
            optimal_length: octile_distance(grid, start, goal),
        })
        .collect();
    Ok(Scenario { version: "1".to_owned(), entries })
}

fn check_capacity(role: &'static str, needed: usize, available: usize) -> Result<(), GenerateError> {
    if available < needed {
        return Err(GenerateError::Capacity { role, needed, available });
    }
    Ok(())
}

fn dedup_cells(cells: &[Vertex]) -> Vec<Vertex> {
    let mut seen = HashSet::new();
    cells.iter().copied().filter(|c| seen.insert(*c)).collect()
}

/// Passable cells within `radius` moves of `center`, row-major.
fn ball(grid: &Grid, center: Vertex, radius: u32) -> Vec<Vertex> {
    let dist = grid.bfs_distances(center);
    (0..grid.cell_count())
        .filter(|&i| dist[i] != UNREACHABLE && dist[i] <= radius)
        .map(|i| grid.vertex_at(i))
        .collect()
}

/// `n` distinct cells from `pool`, by partial Fisher-Yates shuffle.
fn sample_distinct(rng: &mut ChaCha8Rng, pool: &[Vertex], n: usize) -> Vec<Vertex> {
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    for i in 0..n {
        let j = rng.gen_range(i..indices.len());
        indices.swap(i, j);
    }
    indices[..n].iter().map(|&i| pool[i]).collect()
}

/// Like [`sample_distinct`] but the anchor cell is forced to be the first
/// pick.
fn sample_anchored(rng: &mut ChaCha8Rng, anchor: Vertex, pool: &[Vertex], n: usize) -> Vec<Vertex> {
    let rest: Vec<Vertex> = pool.iter().copied().filter(|&c| c != anchor).collect();
    let mut picks = vec![anchor];
    picks.extend(sample_distinct(rng, &rest, n - 1));
    picks
}

/// Shortest-path length from `a` to `b` under octile movement: unit-cost
/// cardinal steps plus sqrt(2)-cost diagonal steps, where a diagonal step
/// requires both adjacent cardinal cells to be passable. Fills the
/// informational optimal-length field of generated scenarios.
pub fn octile_distance(grid: &Grid, a: Vertex, b: Vertex) -> f64 {
    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // Reversed: BinaryHeap is a max-heap and we want the cheapest.
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let sqrt2 = 2f64.sqrt();
    let mut dist = vec![f64::INFINITY; grid.cell_count()];
    let mut heap = BinaryHeap::new();
    dist[grid.index(a)] = 0.0;
    heap.push(Entry(0.0, grid.index(a)));
    while let Some(Entry(d, idx)) = heap.pop() {
        if d > dist[idx] {
            continue;
        }
        if idx == grid.index(b) {
            break;
        }
        let here = grid.vertex_at(idx);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = here.x as i64 + dx;
                let ny = here.y as i64 + dy;
                if nx < 0 || ny < 0 {
                    continue;
                }
                let next = Vertex::new(nx as u32, ny as u32);
                if !grid.is_passable(next) {
                    continue;
                }
                let diagonal = dx != 0 && dy != 0;
                if diagonal {
                    let side_a = Vertex::new(next.x, here.y);
                    let side_b = Vertex::new(here.x, next.y);
                    if !grid.is_passable(side_a) || !grid.is_passable(side_b) {
                        continue;
                    }
                }
                let step = if diagonal { sqrt2 } else { 1.0 };
                let nd = d + step;
                let nidx = grid.index(next);
                if nd < dist[nidx] {
                    dist[nidx] = nd;
                    heap.push(Entry(nd, nidx));
                }
            }
        }
    }
    // Round to the serialized precision so generated scenarios round-trip
    // exactly through their eight-decimal rendering.
    (dist[grid.index(b)] * 1e8).round() / 1e8
}

// ---------------------------------------------------------------------------
// Solution files
// ---------------------------------------------------------------------------

/// Parses a solution file: one line per agent of whitespace-separated `x,y`
/// locations. Lines starting with `#` are comments.
pub fn read_solution(text: &str) -> Result<Solution, ParseError> {
    let mut plans = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut locations = Vec::new();
        for token in line.split_whitespace() {
            let (x, y) = token.split_once(',').ok_or_else(|| {
                ParseError::new(line_no, format!("expected 'x,y' location, got '{token}'"))
            })?;
            let parse = |s: &str, axis: &str| -> Result<u32, ParseError> {
                s.parse().map_err(|_| {
                    ParseError::new(line_no, format!("cannot parse {axis} coordinate from '{token}'"))
                })
            };
            locations.push(Vertex::new(parse(x, "x")?, parse(y, "y")?));
        }
        if locations.is_empty() {
            return Err(ParseError::new(
                line_no,
                "agent line needs at least one location".to_owned(),
            ));
        }
        plans.push(Plan { locations });
    }
    Ok(Solution::new(plans))
}

/// Renders a solution in the format accepted by [`read_solution`].
pub fn write_solution(solution: &Solution) -> String {
    let mut out = String::new();
    for plan in &solution.plans {
        let tokens: Vec<String> =
            plan.locations.iter().map(|l| format!("{},{}", l.x, l.y)).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v;
    use proptest::prelude::*;

    #[test]
    fn parses_a_small_map() {
        let text = "type octile\nheight 1\nwidth 3\nmap\n.@.\n";
        let grid = parse_map(text).unwrap();
        assert_eq!((grid.width(), grid.height()), (3, 1));
        assert!(grid.is_passable(v(0, 0)));
        assert!(!grid.is_passable(v(1, 0)));
        assert!(grid.is_passable(v(2, 0)));
    }

    #[test]
    fn terrain_characters_map_to_passable_and_blocked() {
        let text = "type octile\nheight 2\nwidth 3\nmap\n.GS\n@OT\n";
        let grid = parse_map(text).unwrap();
        for x in 0..3 {
            assert!(grid.is_passable(v(x, 0)));
            assert!(!grid.is_passable(v(x, 1)));
        }
        let water = "type octile\nheight 1\nwidth 1\nmap\nW\n";
        assert!(!parse_map(water).unwrap().is_passable(v(0, 0)));
    }

    #[test]
    fn unknown_character_is_rejected_with_its_line() {
        let text = "type octile\nheight 1\nwidth 3\nmap\n.@X\n";
        let err = parse_map(text).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains('X'), "{}", err.message);
    }

    #[test]
    fn header_problems_are_rejected_with_their_line() {
        let missing = "type octile\nheight 1\nmap\n.\n";
        let err = parse_map(missing).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("width"));

        let wrong_type = "type quadrille\nheight 1\nwidth 1\nmap\n.\n";
        assert_eq!(parse_map(wrong_type).unwrap_err().line, 1);

        let short = "type octile\nheight 2\nwidth 1\nmap\n.\n";
        let err = parse_map(short).unwrap_err();
        assert!(err.message.contains("unexpected end of file"));
    }

    #[test]
    fn row_length_mismatch_is_rejected() {
        let text = "type octile\nheight 1\nwidth 3\nmap\n..\n";
        let err = parse_map(text).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains("expected 3"));
    }

    #[test]
    fn serialize_map_emits_canonical_characters() {
        let text = "type octile\nheight 2\nwidth 3\nmap\n.GS\n@OT\n";
        let grid = parse_map(text).unwrap();
        assert_eq!(serialize_map(&grid), "type octile\nheight 2\nwidth 3\nmap\n...\n@@@\n");
        // Canonical text is a fixed point.
        let canon = serialize_map(&grid);
        assert_eq!(serialize_map(&parse_map(&canon).unwrap()), canon);
    }

    #[test]
    fn parses_a_scenario_line() {
        let text = "version 1\n0\tempty-8-8.map\t8\t8\t0\t0\t5\t3\t6.24264069\n";
        let scen = parse_scen(text).unwrap();
        assert_eq!(scen.entries.len(), 1);
        let e = &scen.entries[0];
        assert_eq!(e.bucket, 0);
        assert_eq!(e.map_name, "empty-8-8.map");
        assert_eq!((e.map_width, e.map_height), (8, 8));
        assert_eq!(e.start, v(0, 0));
        assert_eq!(e.goal, v(5, 3));
        assert!((e.optimal_length - 6.24264069).abs() < 1e-12);
    }

    #[test]
    fn scenario_field_and_bounds_errors_name_their_line() {
        let short = "version 1\n0\tm.map\t8\t8\t0\t0\t5\t3\n";
        let err = parse_scen(short).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("9"));

        let oob = "version 1\n0\tm.map\t8\t8\t0\t0\t8\t3\t1.0\n";
        let err = parse_scen(oob).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("goal"));

        let bad_header = "version 2\n";
        assert_eq!(parse_scen(bad_header).unwrap_err().line, 1);

        let bad_number = "version 1\n0\tm.map\t8\t8\tzero\t0\t5\t3\t1.0\n";
        assert!(parse_scen(bad_number).unwrap_err().message.contains("start x"));
    }

    #[test]
    fn scenario_round_trips_through_canonical_text() {
        let text = "version 1\n\
                    0\tempty-8-8.map\t8\t8\t0\t0\t5\t3\t6.24264069\n\
                    1\tempty-8-8.map\t8\t8\t7\t7\t0\t0\t9.89949494\n";
        let scen = parse_scen(text).unwrap();
        assert_eq!(serialize_scen(&scen), text);
        assert_eq!(parse_scen(&serialize_scen(&scen)).unwrap(), scen);
    }

    #[test]
    fn scenario_instance_takes_a_prefix() {
        let grid = Grid::new(8, 8, &HashSet::new()).unwrap();
        let scen = parse_scen(
            "version 1\n\
             0\tempty-8-8.map\t8\t8\t0\t0\t5\t3\t6.24264069\n\
             0\tempty-8-8.map\t8\t8\t7\t7\t1\t1\t8.48528137\n",
        )
        .unwrap();
        let instance = scenario_instance(&grid, &scen, 2).unwrap();
        assert_eq!(instance.agent_count(), 2);
        assert_eq!(instance.source(1), v(7, 7));
        assert_eq!(instance.target(0), v(5, 3));

        let err = scenario_instance(&grid, &scen, 3).unwrap_err();
        assert_eq!(err, ScenarioInstanceError::NotEnoughEntries { available: 2, requested: 3 });
    }

    #[test]
    fn largest_region_prefers_size_then_scan_order() {
        // Left column (2 cells) vs right block (4 cells).
        let grid = Grid::new(4, 2, &[(1, 0), (1, 1)].into_iter().collect()).unwrap();
        let region = largest_reachable_region(&grid);
        assert_eq!(region.len(), 4);
        assert!(region.iter().all(|c| c.x >= 2));

        // Two 2-cell components: the one containing (0, 0) wins the tie.
        let tie = Grid::new(3, 2, &[(1, 0), (1, 1)].into_iter().collect()).unwrap();
        let region = largest_reachable_region(&tie);
        assert_eq!(region, vec![v(0, 0), v(0, 1)]);

        let walled = Grid::new(1, 1, &[(0, 0)].into_iter().collect()).unwrap();
        assert!(largest_reachable_region(&walled).is_empty());
    }

    #[test]
    fn random_generation_is_deterministic_and_well_formed() {
        let grid = Grid::new(8, 8, &[(3, 3), (4, 4)].into_iter().collect()).unwrap();
        let a = generate_scenario(&grid, "test.map", 10, &ScenarioMode::Random, 42).unwrap();
        let b = generate_scenario(&grid, "test.map", 10, &ScenarioMode::Random, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_scenario(&grid, "test.map", 10, &ScenarioMode::Random, 43).unwrap();
        assert_ne!(a, c, "different seeds should differ");

        let region: HashSet<Vertex> = largest_reachable_region(&grid).into_iter().collect();
        let starts: Vec<Vertex> = a.entries.iter().map(|e| e.start).collect();
        let goals: Vec<Vertex> = a.entries.iter().map(|e| e.goal).collect();
        assert_eq!(starts.iter().collect::<HashSet<_>>().len(), 10, "distinct starts");
        assert_eq!(goals.iter().collect::<HashSet<_>>().len(), 10, "distinct goals");
        assert!(starts.iter().chain(goals.iter()).all(|c| region.contains(c)));
        assert!(a.entries.iter().all(|e| e.map_name == "test.map"));
        // The informational length is at least the straight-line lower
        // bound, allowing for its 8-decimal rounding.
        for e in &a.entries {
            let dx = e.start.x.abs_diff(e.goal.x) as f64;
            let dy = e.start.y.abs_diff(e.goal.y) as f64;
            let octile = dx.max(dy) + (2f64.sqrt() - 1.0) * dx.min(dy);
            assert!(e.optimal_length >= octile - 1e-6);
        }
    }

    #[test]
    fn random_generation_reports_capacity_shortfalls() {
        let grid = Grid::new(2, 2, &HashSet::new()).unwrap();
        let err = generate_scenario(&grid, "m.map", 5, &ScenarioMode::Random, 1).unwrap_err();
        assert_eq!(err, GenerateError::Capacity { role: "start", needed: 5, available: 4 });
    }

    #[test]
    fn clustered_generation_respects_the_radius() {
        let grid = Grid::new(16, 16, &HashSet::new()).unwrap();
        let radius = 3;
        let scen = generate_scenario(
            &grid,
            "m.map",
            6,
            &ScenarioMode::Clustered { radius },
            7,
        )
        .unwrap();
        let anchor_start = scen.entries[0].start;
        let anchor_goal = scen.entries[0].goal;
        for e in &scen.entries {
            let ds = e.start.x.abs_diff(anchor_start.x) + e.start.y.abs_diff(anchor_start.y);
            let dg = e.goal.x.abs_diff(anchor_goal.x) + e.goal.y.abs_diff(anchor_goal.y);
            assert!(ds <= radius, "start {} too far from anchor {anchor_start}", e.start);
            assert!(dg <= radius, "goal {} too far from anchor {anchor_goal}", e.goal);
        }
    }

    #[test]
    fn clustered_generation_can_run_out_of_nearby_cells() {
        let grid = Grid::new(8, 8, &HashSet::new()).unwrap();
        let err = generate_scenario(
            &grid,
            "m.map",
            10,
            &ScenarioMode::Clustered { radius: 1 },
            7,
        )
        .unwrap_err();
        assert!(matches!(err, GenerateError::Capacity { .. }));
    }

    #[test]
    fn designated_generation_draws_from_the_given_pools() {
        let grid = Grid::new(6, 6, &HashSet::new()).unwrap();
        let sources = vec![v(0, 0), v(0, 1), v(0, 2)];
        let targets = vec![v(5, 5), v(5, 4), v(5, 3)];
        let scen = generate_scenario(
            &grid,
            "m.map",
            2,
            &ScenarioMode::Designated { sources: sources.clone(), targets: targets.clone() },
            9,
        )
        .unwrap();
        for e in &scen.entries {
            assert!(sources.contains(&e.start));
            assert!(targets.contains(&e.goal));
        }

        let blocked_grid = Grid::new(6, 6, &[(0, 1)].into_iter().collect()).unwrap();
        let err = generate_scenario(
            &blocked_grid,
            "m.map",
            2,
            &ScenarioMode::Designated { sources, targets },
            9,
        )
        .unwrap_err();
        assert_eq!(err, GenerateError::DesignatedNotPassable(v(0, 1)));
    }

    #[test]
    fn designated_pools_must_share_a_component() {
        let grid = Grid::new(3, 1, &[(1, 0)].into_iter().collect()).unwrap();
        let err = generate_scenario(
            &grid,
            "m.map",
            1,
            &ScenarioMode::Designated { sources: vec![v(0, 0)], targets: vec![v(2, 0)] },
            3,
        )
        .unwrap_err();
        assert_eq!(err, GenerateError::DesignatedDisconnected(v(0, 0), v(2, 0)));
    }

    #[test]
    fn generated_scenarios_build_valid_instances() {
        let grid = Grid::new(8, 8, &[(2, 2), (2, 3), (5, 5)].into_iter().collect()).unwrap();
        for seed in 0..5 {
            let scen =
                generate_scenario(&grid, "m.map", 8, &ScenarioMode::Random, seed).unwrap();
            scenario_instance(&grid, &scen, 8).expect("generated entries form a valid instance");
        }
    }

    #[test]
    fn solution_files_round_trip_and_skip_comments() {
        let text = "# two agents\n0,0 1,0 2,0\n0,2 1,2\n";
        let solution = read_solution(text).unwrap();
        assert_eq!(solution.agent_count(), 2);
        assert_eq!(solution.plans[0].locations, vec![v(0, 0), v(1, 0), v(2, 0)]);
        assert_eq!(write_solution(&solution), "0,0 1,0 2,0\n0,2 1,2\n");
        assert_eq!(read_solution(&write_solution(&solution)).unwrap(), solution);
    }

    #[test]
    fn malformed_solution_lines_are_rejected() {
        assert!(read_solution("0,0 nonsense\n").unwrap_err().message.contains("x,y"));
        assert_eq!(read_solution("0,0\n\n0,1\n").unwrap_err().line, 2);
        assert!(read_solution("0,-1\n").unwrap_err().message.contains("y coordinate"));
    }

    fn arb_grid() -> impl Strategy<Value = Grid> {
        (1u32..6, 1u32..6)
            .prop_flat_map(|(w, h)| {
                (
                    Just(w),
                    Just(h),
                    prop::collection::vec(any::<bool>(), (w * h) as usize),
                )
            })
            .prop_map(|(w, h, passable)| Grid::from_passable(w, h, passable).unwrap())
    }

    proptest! {
        #[test]
        fn map_round_trip_is_identity(grid in arb_grid()) {
            let text = serialize_map(&grid);
            prop_assert_eq!(parse_map(&text).unwrap(), grid);
        }

        #[test]
        fn scen_round_trip_is_identity(
            raw in prop::collection::vec(
                (0u32..10, 0u32..8, 0u32..8, 0u32..8, 0u32..8, 0u64..2_000_000_000),
                0..20,
            )
        ) {
            let entries: Vec<ScenarioEntry> = raw
                .into_iter()
                .map(|(bucket, sx, sy, gx, gy, len)| ScenarioEntry {
                    bucket,
                    map_name: "prop.map".to_owned(),
                    map_width: 8,
                    map_height: 8,
                    start: v(sx, sy),
                    goal: v(gx, gy),
                    // Any value on the eight-decimal lattice survives the
                    // canonical rendering exactly.
                    optimal_length: len as f64 / 1e8,
                })
                .collect();
            let scen = Scenario { version: "1".to_owned(), entries };
            let text = serialize_scen(&scen);
            prop_assert_eq!(parse_scen(&text).unwrap(), scen.clone());
            prop_assert_eq!(serialize_scen(&parse_scen(&text).unwrap()), text);
        }

        #[test]
        fn random_mode_pairs_are_connected(seed in 0u64..50) {
            let grid = Grid::new(
                6,
                6,
                &[(1, 1), (2, 2), (3, 3), (4, 4)].into_iter().collect(),
            )
            .unwrap();
            let scen =
                generate_scenario(&grid, "m.map", 4, &ScenarioMode::Random, seed).unwrap();
            for e in &scen.entries {
                let dist = grid.bfs_distances(e.start);
                prop_assert!(dist[grid.index(e.goal)] != UNREACHABLE);
            }
        }
    }
}
