//! Trust bands, heuristic bands and the decision matrix on the small
//! eight-vehicle reputation list used throughout the docs.
//!
//! ```text
//! cargo run --example worked_bands
//! ```

use vanet_irs::reputation::{
    classify_heuristic, classify_trust, compute_heuristic_bands, compute_trust_bands,
    decide_trust, heuristic_from_distance, RrlStanding, TrustLevel,
};

const LRL: [(u32, u32); 8] = [
    (26, 13),
    (18, 11),
    (2, 7),
    (57, 6),
    (14, 4),
    (11, 3),
    (23, 1),
    (38, 1),
];

fn main() {
    let bands = compute_trust_bands(LRL.iter().map(|&(_, p)| p)).expect("non-empty list");
    println!(
        "points: min {} max {} threshold {}",
        bands.min_points,
        bands.max_points,
        bands.th()
    );
    for (level, range) in bands.level_ranges() {
        match range {
            Some(r) => println!("  {level:?}: {}-{}", r.start(), r.end()),
            None => println!("  {level:?}: empty"),
        }
    }
    println!("\nid   points  level");
    for (id, points) in LRL {
        println!("V{id:<3} {points:>6}  {:?}", classify_trust(points, &bands));
    }

    // Neighbor heuristics spanning 10..=33, as in the ring of vehicles
    // around the receiver.
    let hs = [10.0, 11.0, 14.0, 18.0, 22.0, 27.0, 30.0, 33.0];
    let hb = compute_heuristic_bands(hs).expect("non-empty heuristics");
    println!(
        "\nheuristics: w {:.3}  near below {:.3}  away from {:.3}",
        hb.w,
        hb.h_eval,
        3.0 * hb.w
    );
    let h = heuristic_from_distance(110.0).expect("valid distance");
    println!("sender 110 m from the event: H = {h} -> {:?}", classify_heuristic(h, &hb));
    for h in [16.0, 23.1] {
        println!("H = {h} -> {:?}", classify_heuristic(h, &hb));
    }

    println!("\nLRL \\ RRL  flagged  watch    clear");
    for local in TrustLevel::ALL.into_iter().rev() {
        let row: Vec<String> = RrlStanding::ALL
            .iter()
            .map(|&g| format!("{:<8}", format!("{:?}", decide_trust(local, g))))
            .collect();
        println!("{:<10} {}", format!("{local:?}"), row.join(" "));
    }
}
