//! Generates the bundled synthetic road network `data/road300.edges`.
//!
//! A 17×18 street grid: most streets are one-way with alternating directions,
//! every fourth street in each direction is a two-way avenue. Edge prior
//! means are paces in seconds per metre drawn from a per-street speed.
//!
//! ```text
//! cargo run --example gen_road_grid > crates/core/data/road300.edges
//! ```

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROWS: usize = 17;
const COLS: usize = 18;
const SEED: u64 = 300;

fn name(r: usize, c: usize) -> String {
    format!("r{r}c{c}")
}

fn main() -> io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let out = io::stdout();
    let mut out = out.lock();
    writeln!(out, "# synthetic {ROWS}x{COLS} street grid, generated by examples/gen_road_grid.rs (seed {SEED})")?;
    writeln!(out, "# tail head pace_s_per_m")?;

    let pace = |rng: &mut ChaCha8Rng, avenue: bool| -> f64 {
        // speeds in m/s; avenues are faster on average
        let speed: f64 = if avenue { rng.random_range(6.0..15.0) } else { rng.random_range(2.0..10.0) };
        (1.0 / speed * 1e4).round() / 1e4
    };

    for r in 0..ROWS {
        let avenue = r % 4 == 0;
        let eastbound = r % 2 == 0;
        for c in 0..COLS - 1 {
            let (a, b) = (name(r, c), name(r, c + 1));
            let (tail, head) = if eastbound { (&a, &b) } else { (&b, &a) };
            writeln!(out, "{tail} {head} {}", pace(&mut rng, avenue))?;
            if avenue {
                writeln!(out, "{head} {tail} {}", pace(&mut rng, avenue))?;
            }
        }
    }
    for c in 0..COLS {
        let avenue = c % 4 == 0;
        let southbound = c % 2 == 0;
        for r in 0..ROWS - 1 {
            let (a, b) = (name(r, c), name(r + 1, c));
            let (tail, head) = if southbound { (&a, &b) } else { (&b, &a) };
            writeln!(out, "{tail} {head} {}", pace(&mut rng, avenue))?;
            if avenue {
                writeln!(out, "{head} {tail} {}", pace(&mut rng, avenue))?;
            }
        }
    }
    Ok(())
}
