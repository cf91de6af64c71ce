//! Closure table and closure-quantity scan.

use rayon::prelude::*;

use affine_elastica::synthesis::{closure_lhs_complex, solve_closure};

use crate::{CmdResult, Failure};

/// Rotation data (m, n) of the rows always listed first.
pub const PUBLISHED_ROWS: [(u32, u32); 4] = [(3, 4), (4, 5), (29, 37), (17, 24)];

fn parse_pair(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::input(format!("expected M:N with positive integers, got '{s}'"));
    let (m, n) = s.split_once(':').ok_or_else(bad)?;
    let m: u32 = m.trim().parse().map_err(|_| bad())?;
    let n: u32 = n.trim().parse().map_err(|_| bad())?;
    if m == 0 || n == 0 {
        return Err(bad());
    }
    Ok((m, n))
}

fn row(m: u32, n: u32) -> String {
    match solve_closure(m, n) {
        Ok(s) => format!(
            "{m:>4} {n:>4}  {:>14.10}  {:>14.10}  {:>14.10}i  {:.10} - {:.10}i",
            s.big_q,
            s.w1(),
            s.w2_abs(),
            s.w1(),
            s.d.abs(),
        ),
        Err(_) => format!("{m:>4} {n:>4}  no solution found"),
    }
}

pub fn cmd_table(extra: &[String]) -> CmdResult {
    let mut pairs = PUBLISHED_ROWS.to_vec();
    for s in extra {
        pairs.push(parse_pair(s)?);
    }
    let rows: Vec<String> = pairs.par_iter().map(|&(m, n)| row(m, n)).collect();
    println!(
        "{:>4} {:>4}  {:>14}  {:>14}  {:>15}  c",
        "m", "n", "Q", "w1", "w2"
    );
    for r in rows {
        println!("{r}");
    }
    Ok(0)
}

pub fn cmd_scan_closure(q_min: f64, q_max: f64, steps: usize) -> CmdResult {
    if !(q_min > 1.0 && q_max > q_min && q_max.is_finite()) || steps < 2 {
        return Err(Failure::input("need 1 < Qmin < Qmax and at least 2 steps"));
    }
    let (la, lb) = (q_min.ln(), q_max.ln());
    let lines: Vec<String> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let q = (la + (lb - la) * i as f64 / (steps - 1) as f64).exp();
            match closure_lhs_complex(q) {
                Ok((lhs, d)) => format!("{q:.16e},{:.16e},{d:.16e}", lhs.re),
                Err(_) => format!("{q:.16e},NaN,NaN"),
            }
        })
        .collect();
    println!("Q,lhs,d");
    for l in lines {
        println!("{l}");
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("5:7").ok(), Some((5, 7)));
        assert!(parse_pair("5").is_err());
        assert!(parse_pair("0:3").is_err());
        assert!(parse_pair("a:b").is_err());
    }

    #[test]
    fn first_row_matches_table() {
        let r = row(3, 4);
        assert!(r.contains("3.9408542"), "{r}");
    }
}
