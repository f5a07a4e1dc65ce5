//! Exhaustive grid enumeration over the simplex and the unit box.
//!
//! These back the brute-force test oracles. They are deliberately dumb:
//! no pruning, every grid point visited, small dimensions only.

use crate::{Error, Result};

/// Largest dimension the grid oracles will enumerate.
pub const MAX_GRID_DIM: usize = 4;

/// Visits every point of the simplex grid `{α : α_i = c_i/steps, Σ c_i = steps}`.
pub fn for_each_simplex_point<F: FnMut(&[f64])>(
    dim: usize,
    steps: usize,
    mut f: F,
) -> Result<()> {
    check(dim, steps)?;
    let n = steps;
    let inv = 1.0 / n as f64;
    let mut buf = [0.0f64; MAX_GRID_DIM];
    match dim {
        1 => {
            buf[0] = 1.0;
            f(&buf[..1]);
        }
        2 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                buf[1] = (n - a) as f64 * inv;
                f(&buf[..2]);
            }
        }
        3 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                for b in 0..=(n - a) {
                    buf[1] = b as f64 * inv;
                    buf[2] = (n - a - b) as f64 * inv;
                    f(&buf[..3]);
                }
            }
        }
        4 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                for b in 0..=(n - a) {
                    buf[1] = b as f64 * inv;
                    for c in 0..=(n - a - b) {
                        buf[2] = c as f64 * inv;
                        buf[3] = (n - a - b - c) as f64 * inv;
                        f(&buf[..4]);
                    }
                }
            }
        }
        _ => unreachable!("guarded by check()"),
    }
    Ok(())
}

/// Visits every point of the box grid `{y : y_i = c_i/steps, c_i in 0..=steps}`.
pub fn for_each_box_point<F: FnMut(&[f64])>(dim: usize, steps: usize, mut f: F) -> Result<()> {
    check(dim, steps)?;
    let n = steps;
    let inv = 1.0 / n as f64;
    let mut buf = [0.0f64; MAX_GRID_DIM];
    match dim {
        1 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                f(&buf[..1]);
            }
        }
        2 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                for b in 0..=n {
                    buf[1] = b as f64 * inv;
                    f(&buf[..2]);
                }
            }
        }
        3 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                for b in 0..=n {
                    buf[1] = b as f64 * inv;
                    for c in 0..=n {
                        buf[2] = c as f64 * inv;
                        f(&buf[..3]);
                    }
                }
            }
        }
        4 => {
            for a in 0..=n {
                buf[0] = a as f64 * inv;
                for b in 0..=n {
                    buf[1] = b as f64 * inv;
                    for c in 0..=n {
                        buf[2] = c as f64 * inv;
                        for d in 0..=n {
                            buf[3] = d as f64 * inv;
                            f(&buf[..4]);
                        }
                    }
                }
            }
        }
        _ => unreachable!("guarded by check()"),
    }
    Ok(())
}

fn check(dim: usize, steps: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::EmptyVector);
    }
    if dim > MAX_GRID_DIM {
        return Err(Error::GridTooLarge {
            dim,
            max_dim: MAX_GRID_DIM,
        });
    }
    if steps == 0 {
        return Err(Error::InvalidValue {
            what: "grid steps",
            value: 0.0,
        });
    }
    Ok(())
}
