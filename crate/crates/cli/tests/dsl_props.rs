use citor_cli::parse_session;
use proptest::prelude::*;

const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn monomial(n: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(0u8..3, n).prop_map(|e| {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { VARS[i].to_string() } else { format!("{}^{k}", VARS[i]) })
            .collect();
        if parts.is_empty() { "1".into() } else { parts.join("*") }
    })
}

fn poly(n: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((-5i32..6, monomial(n)), 1..4).prop_map(|ts| {
        let mut s = String::new();
        for (i, (c, m)) in ts.into_iter().enumerate() {
            let c = if c == 0 { 1 } else { c };
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            s.push_str(&format!("{sign}{}*{m}", c.abs()));
        }
        s
    })
}

fn script() -> impl Strategy<Value = String> {
    (1usize..=4).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(poly(n), 0..3),
            prop::collection::vec(prop::collection::vec(poly(n), 2), 1..3),
            0usize..6,
        )
            .prop_map(|(n, ideal, rows, bound)| {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                format!(
                    "ring R = quotient(vars=[{}], ideal=[{}])\nmodule M = coker(R, matrix=[{}])\nmodule D = dual(M)\n\
                     tor(M, D, bound={})\nbetti(M)\nexample 3.14\n",
                    VARS[..n].join(", "),
                    ideal.join(", "),
                    rows.join(", "),
                    bound + 1
                )
            })
    })
}

proptest! {
    #[test]
    fn printed_sessions_parse_back(text in script()) {
        let s = parse_session(&text).unwrap();
        let again = parse_session(&s.to_script()).unwrap();
        prop_assert_eq!(&s, &again);
        prop_assert_eq!(s.to_script(), again.to_script());
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9=(),\\[\\]*^+\\- \n]{0,80}") {
        let _ = parse_session(&text);
    }
}
