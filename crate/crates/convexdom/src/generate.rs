//! Deterministic instance families.

use convexdom_core::Graph;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Connectivity retries for `gnm` before giving up.
pub const GNM_RETRIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path {
        n: u32,
    },
    Cycle {
        n: u32,
    },
    Grid {
        rows: u32,
        cols: u32,
    },
    /// Grid with wrap-around in both directions.
    Torus {
        rows: u32,
        cols: u32,
    },
    /// Uniform random graph with `m` edges, conditioned on connectivity.
    Gnm {
        n: u32,
        m: u64,
        seed: u64,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{0}")]
    Parameters(String),
    #[error("no connected G(n={n}, m={m}) sample after {GNM_RETRIES} attempts (seed {seed})")]
    NotConnected { n: u32, m: u64, seed: u64 },
}

fn require(ok: bool, msg: &str) -> Result<(), GenError> {
    if ok {
        Ok(())
    } else {
        Err(GenError::Parameters(msg.to_string()))
    }
}

impl Family {
    /// Parses `path 5`, `torus 3 4`, `gnm 10 14 42`, ...
    pub fn parse(words: &[&str]) -> Result<Family, GenError> {
        let nums: Vec<u64> = words
            .iter()
            .skip(1)
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| GenError::Parameters(format!("invalid number `{w}`")))
            })
            .collect::<Result<_, _>>()?;
        let arity = |k: usize| {
            require(
                nums.len() == k,
                &format!("`{}` takes {k} argument(s)", words.first().unwrap_or(&"")),
            )
        };
        let small = |x: u64| {
            u32::try_from(x).map_err(|_| GenError::Parameters(format!("{x} is too large")))
        };
        match words.first().copied() {
            Some("path") => {
                arity(1)?;
                Ok(Family::Path { n: small(nums[0])? })
            }
            Some("cycle") => {
                arity(1)?;
                Ok(Family::Cycle { n: small(nums[0])? })
            }
            Some("grid") => {
                arity(2)?;
                Ok(Family::Grid {
                    rows: small(nums[0])?,
                    cols: small(nums[1])?,
                })
            }
            Some("torus") => {
                arity(2)?;
                Ok(Family::Torus {
                    rows: small(nums[0])?,
                    cols: small(nums[1])?,
                })
            }
            Some("gnm") => {
                arity(3)?;
                Ok(Family::Gnm {
                    n: small(nums[0])?,
                    m: nums[1],
                    seed: nums[2],
                })
            }
            other => Err(GenError::Parameters(format!(
                "unknown family `{}` (path, cycle, grid, torus, gnm)",
                other.unwrap_or("")
            ))),
        }
    }

    /// Short instance name, e.g. `torus_3x4` or `gnm_10_14_s42`.
    pub fn name(&self) -> String {
        match *self {
            Family::Path { n } => format!("path_{n}"),
            Family::Cycle { n } => format!("cycle_{n}"),
            Family::Grid { rows, cols } => format!("grid_{rows}x{cols}"),
            Family::Torus { rows, cols } => format!("torus_{rows}x{cols}"),
            Family::Gnm { n, m, seed } => format!("gnm_{n}_{m}_s{seed}"),
        }
    }

    pub fn generate(&self) -> Result<Graph, GenError> {
        let edges = match *self {
            Family::Path { n } => {
                require(n >= 1, "path needs n >= 1")?;
                (1..n).map(|i| (i, i + 1)).collect()
            }
            Family::Cycle { n } => {
                require(n >= 3, "cycle needs n >= 3")?;
                let mut e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
                e.push((n, 1));
                e
            }
            Family::Grid { rows, cols } => {
                require(rows >= 1 && cols >= 1, "grid needs positive dimensions")?;
                let id = |r: u32, c: u32| r * cols + c + 1;
                let mut e = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        if c + 1 < cols {
                            e.push((id(r, c), id(r, c + 1)));
                        }
                        if r + 1 < rows {
                            e.push((id(r, c), id(r + 1, c)));
                        }
                    }
                }
                e
            }
            Family::Torus { rows, cols } => {
                // smaller sides would create loops or parallel edges
                require(rows >= 3 && cols >= 3, "torus needs both dimensions >= 3")?;
                let id = |r: u32, c: u32| r * cols + c + 1;
                let mut e = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        e.push((id(r, c), id(r, (c + 1) % cols)));
                        e.push((id(r, c), id((r + 1) % rows, c)));
                    }
                }
                e
            }
            Family::Gnm { n, m, seed } => return gnm(n, m, seed),
        };
        let n = match *self {
            Family::Path { n } | Family::Cycle { n } => n,
            Family::Grid { rows, cols } | Family::Torus { rows, cols } => rows * cols,
            Family::Gnm { .. } => unreachable!(),
        };
        Graph::with_vertex_count(n, &edges).map_err(|e| GenError::Parameters(e.to_string()))
    }
}

fn gnm(n: u32, m: u64, seed: u64) -> Result<Graph, GenError> {
    require(n >= 1, "gnm needs n >= 1")?;
    let pairs = u64::from(n) * u64::from(n - 1) / 2;
    require(
        m + 1 >= u64::from(n),
        "gnm needs m >= n - 1 to be connected",
    )?;
    require(m <= pairs, "gnm needs m <= n(n-1)/2")?;
    let all: Vec<(u32, u32)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GNM_RETRIES {
        let mut picked: Vec<usize> = index::sample(&mut rng, all.len(), m as usize).into_vec();
        picked.sort_unstable();
        let edges: Vec<_> = picked.into_iter().map(|i| all[i]).collect();
        if let Ok(g) = Graph::with_vertex_count(n, &edges) {
            return Ok(g);
        }
    }
    Err(GenError::NotConnected { n, m, seed })
}
