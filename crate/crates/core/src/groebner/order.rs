use std::cmp::Ordering;
use std::fmt;

/// A monomial order on exponent vectors of a fixed ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    DegRevLex,
    /// The first `size` variables are compared with `head`; ties are broken
    /// on the remaining variables with `tail`. Eliminates the leading block.
    Block {
        size: usize,
        head: Box<MonomialOrder>,
        tail: Box<MonomialOrder>,
    },
    /// Compares the dot products with each row in turn, then falls back to
    /// `tail`. The caller must make sure the result is a well-order.
    Matrix {
        rows: Vec<Vec<i64>>,
        tail: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Degrevlex on each side of a block split after `size` variables.
    pub fn elimination(size: usize) -> Self {
        MonomialOrder::Block {
            size,
            head: Box::new(MonomialOrder::DegRevLex),
            tail: Box::new(MonomialOrder::DegRevLex),
        }
    }

    pub fn compare(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.cmp_slices(a, b)
    }

    pub(crate) fn cmp_slices<T>(&self, a: &[T], b: &[T]) -> Ordering
    where
        T: Copy + Ord + Into<u64>,
    {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let da: u64 = a.iter().map(|&x| x.into()).sum();
                let db: u64 = b.iter().map(|&x| x.into()).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::Block { size, head, tail } => {
                let k = (*size).min(a.len());
                head.cmp_slices(&a[..k], &b[..k])
                    .then_with(|| tail.cmp_slices(&a[k..], &b[k..]))
            }
            MonomialOrder::Matrix { rows, tail } => {
                let dot = |row: &[i64], v: &[T]| -> i128 {
                    row.iter()
                        .zip(v)
                        .map(|(&w, &x)| w as i128 * x.into() as i128)
                        .sum()
                };
                for row in rows {
                    let o = dot(row, a).cmp(&dot(row, b));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                tail.cmp_slices(a, b)
            }
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::DegRevLex => write!(f, "degrevlex"),
            MonomialOrder::Block { size, head, tail } => {
                write!(f, "block({size}; {head}, {tail})")
            }
            MonomialOrder::Matrix { rows, tail } => {
                write!(f, "matrix({rows:?}; {tail})")
            }
        }
    }
}
