//! Seeded instance families and the two instance file formats.

use num_bigint::BigUint;
use orbital_ssp::{instance::parse_instance, Family};

fn main() -> orbital_ssp::Result<()> {
    let fams = [
        Family::Random { n: 8, m: 12, seed: 3 },
        Family::Cp { n: 8, k1: 9u32.into() },
        Family::Ap { n: 8, k1: 5u32.into(), k2: 3u32.into() },
        Family::Gp { n: 8, k1: 1u32.into(), r: 3u32.into() },
        Family::Dissociated { n: 8 },
    ];
    for f in &fams {
        let inst = f.generate(None)?;
        println!("{:<12} a={:?} T={}", f.name(), inst.user_a(), inst.target());
    }

    let inst = fams[0].generate(Some(BigUint::from(100u32)))?;
    let text = inst.to_text();
    let json = inst.to_json().to_string();
    print!("{text}");
    println!("{json}");
    assert_eq!(parse_instance(&text)?.user_a(), parse_instance(&json)?.user_a());
    Ok(())
}
