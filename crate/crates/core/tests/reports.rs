use sumrank::report::{analyze, verify, CodeFile, Descriptor, CHECKS, FAMILIES};
use sumrank::search::search;
use sumrank::SweepOpts;

fn small(family: &str) -> Descriptor {
    let (q, m, k) = match family {
        "two_fold_lrs" => (2, 3, None),
        "twisted_lrs" | "completed_twisted_lrs" => (5, 2, None),
        "lrs" => (3, 2, Some(2)),
        _ => (2, 3, None),
    };
    let profile = (family == "random").then(|| vec![2, 1]);
    let k = if family == "random" { Some(2) } else { k };
    Descriptor { family: family.into(), q, m, k, profile, seed: Some(1), ..Descriptor::default() }
}

#[test]
fn code_files_round_trip() {
    for fam in FAMILIES {
        let d = small(fam);
        let built = d.build().unwrap();
        let file = CodeFile::new(&built.code, Some(d.clone()), built.lift);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let back = CodeFile::parse(&text).unwrap().to_code().unwrap();
        assert!(back.same_code(&built.code), "{fam}");
        assert_eq!(back.generator(), built.code.generator());
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    for fam in ["doubly_extended_lrs", "two_fold_lrs", "club_lift"] {
        let c = small(fam).build().unwrap().code;
        let one = SweepOpts::with_workers(1);
        let four = SweepOpts::with_workers(4);
        let a = serde_json::to_string(&analyze(&c, one).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&c, four).unwrap()).unwrap();
        assert_eq!(a, b);
        let a = serde_json::to_string(&verify(&c, CHECKS, one).unwrap()).unwrap();
        let b = serde_json::to_string(&verify(&c, CHECKS, four).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn one_weight_families_verify() {
    for fam in ["doubly_extended_lrs", "two_fold_lrs", "completed_twisted_lrs", "club_lift", "all_points"] {
        let c = small(fam).build().unwrap().code;
        let r = verify(&c, CHECKS, SweepOpts::default()).unwrap();
        assert!(r.passed(), "{fam}: {}", serde_json::to_string(&r).unwrap());
        assert!(analyze(&c, SweepOpts::default()).unwrap().one_weight.is_some(), "{fam}");
    }
}

#[test]
fn unknown_descriptor_fields_are_rejected() {
    let err = serde_json::from_str::<Descriptor>(r#"{"family":"lrs","q":2,"m":2,"colour":1}"#);
    assert!(err.is_err());
}

#[test]
fn search_beyond_extremal_t() {
    let r = search(2, 3, 5, 1 << 20, SweepOpts::default()).unwrap();
    assert!(r.admissible_shapes().iter().all(|s| s.len() == 5));
    let r = search(2, 3, 4, 1 << 20, SweepOpts::default()).unwrap();
    assert!(r.admissible_shapes().is_empty());
}
