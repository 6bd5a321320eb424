//! Partitions, nested pairs (a diagram plus one addable box), and the
//! arm/leg statistics entering the fixed-point denominators.
//!
//! Cells are `(row, col)` with row `r` holding `parts[r]` cells; the cell
//! `(r, c)` carries the torus weight `q^c t^r`. The arm of a cell counts
//! cells strictly to its right in its row, the leg counts cells strictly
//! below it in its column, both taken in the ambient diagram.

/// Weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing"
        );
        assert!(
            parts.iter().all(|&p| p > 0),
            "partition parts must be positive"
        );
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.parts.len()
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        c.row < self.parts.len() && c.col < self.parts[c.row]
    }

    /// All cells, row by row.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                out.push(Cell { row: r, col: c });
            }
        }
        out
    }

    /// Cells strictly right of `c` in its row. Panics when `c` is outside.
    pub fn arm(&self, c: Cell) -> usize {
        assert!(
            self.contains_cell(c),
            "cell {c:?} not in diagram {:?}",
            self.parts
        );
        self.parts[c.row] - 1 - c.col
    }

    /// Cells strictly below `c` in its column. Panics when `c` is outside.
    pub fn leg(&self, c: Cell) -> usize {
        assert!(
            self.contains_cell(c),
            "cell {c:?} not in diagram {:?}",
            self.parts
        );
        self.parts[c.row + 1..]
            .iter()
            .take_while(|&&len| len > c.col)
            .count()
    }

    /// Positions where a box can be added keeping a valid partition,
    /// top row first.
    pub fn addable_corners(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for r in 0..=self.parts.len() {
            let here = self.parts.get(r).copied().unwrap_or(0);
            let above = if r == 0 {
                usize::MAX
            } else {
                self.parts[r - 1]
            };
            if above > here {
                out.push(Cell { row: r, col: here });
            }
        }
        out
    }

    /// Serializes as the plain list of parts.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.parts)
    }

    /// The partition with one box added at an addable corner.
    pub fn add_box(&self, c: Cell) -> Partition {
        let mut parts = self.parts.clone();
        if c.row == parts.len() {
            assert_eq!(c.col, 0, "new row must start at column 0");
            parts.push(1);
        } else {
            assert_eq!(c.col, parts[c.row], "cell is not the end of its row");
            parts[c.row] += 1;
        }
        Partition::new(parts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// `(q, t)` weight exponents of a cell: `q^col t^row`.
pub fn cell_weight(c: Cell) -> (i64, i64) {
    (c.col as i64, c.row as i64)
}

/// A partition of `n` together with an addable box, i.e. a torus fixed
/// point of the nested Hilbert scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedPair {
    pub lambda: Partition,
    pub added: Cell,
}

impl NestedPair {
    /// The larger diagram, `lambda` with the added box.
    pub fn mu(&self) -> Partition {
        self.lambda.add_box(self.added)
    }

    /// `{"lambda": [..], "box": [row, col]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "lambda": self.lambda.parts(), "box": [self.added.row, self.added.col] })
    }
}

/// All partitions of `n`, first part descending, each exactly once.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// All nested pairs of total size `n` plus one.
pub fn nested_pairs(n: usize) -> Vec<NestedPair> {
    let mut out = Vec::new();
    for lambda in partitions_of(n) {
        for added in lambda.addable_corners() {
            out.push(NestedPair {
                lambda: lambda.clone(),
                added,
            });
        }
    }
    out
}

/// Splits `mu` minus the added box into the cells sharing the box's row,
/// the cells sharing its column, and the rest. Together with the box the
/// three sets partition `mu`.
pub fn row_col_cells(mu: &Partition, added: Cell) -> (Vec<Cell>, Vec<Cell>, Vec<Cell>) {
    assert!(mu.contains_cell(added), "added box must lie in mu");
    let mut row = Vec::new();
    let mut col = Vec::new();
    let mut rest = Vec::new();
    for c in mu.cells() {
        if c == added {
            continue;
        } else if c.row == added.row {
            row.push(c);
        } else if c.col == added.col {
            col.push(c);
        } else {
            rest.push(c);
        }
    }
    (row, col, rest)
}
