use num_bigint::BigUint;
use orbital_ssp::instance::{is_dissociated, parse_instance};
use orbital_ssp::{Error, Family, Instance};

#[test]
fn text_and_json_forms() {
    let a = parse_instance("4 5\n7 3 6 5\n13\n").unwrap();
    let b = parse_instance(r#"{"n":4,"m":5,"a":[7,"3",6,5],"T":"13"}"#).unwrap();
    assert_eq!(a.user_a(), b.user_a());
    assert_eq!(a.a(), &[3u32, 5, 6, 7].map(BigUint::from));
    assert_eq!(a.m(), 5);
    assert_eq!(parse_instance("4\n7 3 6 5\n13").unwrap().m(), 3);
    assert_eq!(parse_instance(&a.to_text()).unwrap().user_a(), a.user_a());
    assert_eq!(parse_instance(&a.to_json().to_string()).unwrap().target(), a.target());
}

#[test]
fn parse_errors() {
    for bad in ["", "3\n1 2\n3", "2\n1 -2\n3", "2\n1 0\n3", "x\n1 2\n3", r#"{"a":[1,2]}"#, "2\n1 2\n3\n4"] {
        assert!(matches!(parse_instance(bad), Err(Error::Parse(_))), "{bad:?}");
    }
}

#[test]
fn user_index_round_trip() {
    let inst = Instance::from_u64(&[9, 2, 7, 2, 5], 11).unwrap();
    for r in 0u32..32 {
        let r = BigUint::from(r);
        let s = inst.from_user_index(&r).unwrap();
        assert_eq!(inst.to_user_index(&s), r);
        assert_eq!(inst.sigma(&s).unwrap(), inst.sigma_user(&r).unwrap());
    }
    assert!(inst.sigma(&BigUint::from(32u32)).is_err());
}

#[test]
fn prefix_sums() {
    let inst = Instance::from_u64(&[4, 1, 3], 5).unwrap();
    assert_eq!(inst.prefix().a, [0u32, 1, 4, 8].map(BigUint::from));
    assert_eq!(inst.prefix().b, [0u32, 1, 3, 7].map(BigUint::from));
    assert_eq!(inst.total(), &BigUint::from(8u32));
}

#[test]
fn families() {
    let seq = |f: Family| f.sequence().unwrap();
    assert_eq!(seq(Family::Ap { n: 4, k1: 5u32.into(), k2: 2u32.into() }), [5u32, 7, 9, 11].map(BigUint::from));
    assert_eq!(seq(Family::Gp { n: 4, k1: 3u32.into(), r: 2u32.into() }), [3u32, 6, 12, 24].map(BigUint::from));
    assert_eq!(seq(Family::Cp { n: 3, k1: 4u32.into() }), [4u32; 3].map(BigUint::from));
    assert_eq!(seq(Family::Dissociated { n: 4 }), [1u32, 2, 4, 8].map(BigUint::from));
    let r1 = seq(Family::Random { n: 10, m: 12, seed: 3 });
    assert_eq!(r1, seq(Family::Random { n: 10, m: 12, seed: 3 }));
    assert_ne!(r1, seq(Family::Random { n: 10, m: 12, seed: 4 }));
    assert!(r1.iter().all(|v| v.bits() <= 12 && *v > BigUint::default()));
}

#[test]
fn dissociation() {
    assert!(is_dissociated(&Family::Dissociated { n: 12 }.generate(None).unwrap()).unwrap());
    assert!(!is_dissociated(&Instance::from_u64(&[1, 2, 3], 3).unwrap()).unwrap());
    assert!(!is_dissociated(&Instance::from_u64(&[5, 5], 5).unwrap()).unwrap());
    assert!(is_dissociated(&Instance::from_u64(&[1, 3, 9, 27], 3).unwrap()).unwrap());
}
