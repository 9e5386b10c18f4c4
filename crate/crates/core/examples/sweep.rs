//! Verifies every pair in a square window whose predicted Sylow order has
//! exponent at most `max_e`, printing non-matching reports and case counts.
//!
//! Usage: `cargo run --release --example sweep -- <lo> <hi> <max_e>`

use std::collections::BTreeMap;

use macdonald_core::predictor::{predict, prime_support, GroupParams};
use macdonald_core::verifier::{verify, Status, VerifyOptions};

fn main() {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("integer argument"))
        .collect();
    let [lo, hi, max_e] = args[..] else {
        eprintln!("usage: sweep <lo> <hi> <max_e>");
        std::process::exit(3);
    };
    let opts = VerifyOptions::default();
    let mut counts = BTreeMap::new();
    for a in lo..=hi {
        for b in lo..=hi {
            let Ok(params) = GroupParams::new(a, b) else {
                continue;
            };
            for p in prime_support(&params).unwrap() {
                let pr = predict(&params, p).unwrap();
                if pr.e as i64 > max_e {
                    continue;
                }
                let r = verify(a, b, p, &opts);
                *counts.entry(pr.case).or_insert(0u32) += 1;
                if r.status != Status::Match {
                    println!("{}", r.to_json());
                }
            }
        }
    }
    for (case, n) in counts {
        println!("{case:>7} {n}");
    }
}
