use std::collections::VecDeque;

use super::grid::OccupancyGrid;

pub const FOUR: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
pub const EIGHT: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// A connected set of cells; `id` orders components by their smallest cell index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    /// Ascending cell indices.
    pub cells: Vec<usize>,
}

impl Component {
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.cells.binary_search(&idx).is_ok()
    }
}

fn flood(grid: &OccupancyGrid, want_marked: bool, nbrs: &[(i64, i64)]) -> Vec<Component> {
    let n = grid.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] || grid.is_marked(start) != want_marked {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut cells = Vec::new();
        while let Some(c) = queue.pop_front() {
            cells.push(c);
            for &(di, dj) in nbrs {
                let (nb, _) = grid.step(c, di, dj);
                if !seen[nb] && grid.is_marked(nb) == want_marked {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        cells.sort_unstable();
        out.push(Component { id: out.len(), cells });
    }
    out
}

/// 4-connected components of the unmarked cells, with wraparound.
pub fn complement_components(grid: &OccupancyGrid) -> Vec<Component> {
    flood(grid, false, &FOUR)
}

/// 8-connected components of the marked cells, with wraparound.
pub fn marked_components(grid: &OccupancyGrid) -> Vec<Component> {
    flood(grid, true, &EIGHT)
}

/// Per-cell component id (`usize::MAX` for cells outside every component).
pub fn label_map(grid: &OccupancyGrid, comps: &[Component]) -> Vec<usize> {
    let mut labels = vec![usize::MAX; grid.len()];
    for c in comps {
        for &cell in &c.cells {
            labels[cell] = c.id;
        }
    }
    labels
}
