macro_rules! example {
    ($name:ident, $file:literal, $check:expr) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            let out = $name::run_example().expect("example runs");
            let check: fn(&str) -> bool = $check;
            assert!(check(&out), "unexpected output:\n{out}");
        }
    };
}

example!(translate_basics, "translate_basics.rs", |o| o.contains("v[x2|x1] = bot"));
example!(count_only_report, "count_only_report.rs", |o| o.contains("D_phi: 16") && o.contains("Delta free variables: 9 (formula 9)"));
example!(check_qf_corpus, "check_qf_corpus.rs", |o| o.contains("checks agree"));
example!(mix_worked, "mix_worked.rs", |o| o.contains("H(1/4) = 1/2") && o.contains("H(1/2) = 3/4"));
example!(extend_worked, "extend_worked.rs", |o| o.contains("f2 = pl: (0, 0) (1/4, 1/4) (1/2, 0) (3/4, -1/8) (1, 0)"));
example!(witness_roundtrip, "witness_roundtrip.rs", |o| o.contains("realized pairs: 81") && o.contains("hidden true / witness true"));
example!(validate_lambda, "validate_lambda.rs", |o| o.contains("result: pass") && !o.contains("after corrupting two entries: 0 "));
example!(certificate_check, "certificate_check.rs", |o| o.starts_with("# UNSOUND-SCHEDULE") && o.matches("agree true").count() == 2);
example!(model_axioms, "model_axioms.rs", |o| o.contains("zero set: {0} + [1/2,3/4]"));
example!(family_files, "family_files.rs", |o| o.contains("index: "));
