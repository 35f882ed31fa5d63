//! Generates every non-decreasing path of the running instance by nested
//! `tau` transforms, checks that their vertices cover the point set, and
//! reports segment statistics. Pass a file name to also write an SVG.
//!
//! ```text
//! cargo run --release --example ndp_family -- family.svg
//! ```

use orbital_ssp::{instance::parse_instance, ndp};

fn main() -> orbital_ssp::Result<()> {
    let inst = parse_instance(include_str!("../data/main.txt"))?;
    let n = inst.n() as u32;
    let fam = ndp::enumerate_ndps(n)?;
    println!("{} paths", fam.len());
    for ch in fam.iter().take(4) {
        println!("  {ch}");
    }

    let cov = ndp::coverage_check(&inst, &fam)?;
    println!("covers all {} points: {}", 1u64 << n, cov.complete);

    let st = ndp::segment_stats(&inst, &fam, Some(inst.target()))?;
    println!("unique segments {}", st.unique);
    let m = st.multiplicities();
    println!("segments crossing y=T: {} multiplicities {:?} sum {}", m.len(), m, m.iter().sum::<usize>());

    let q5 = ndp::apply_path(ndp::CurveKind::Q, n, &[8, 5])?;
    println!("tau_5 tau_8 q_9 = {q5}");

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, ndp::family_svg(&inst, &fam, inst.target()))?;
        println!("wrote {path}");
    }
    Ok(())
}
