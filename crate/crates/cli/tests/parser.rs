use proptest::prelude::*;
use rankp_cli::ast::{BinOp, Expr, ExprKind, Mode, Pos, Var};
use rankp_cli::{parse_document, parse_expression, ErrorClass};

fn leaf(mixed: bool) -> BoxedStrategy<Expr> {
    let vars = if mixed { vec![Var::BigT, Var::Lambda, Var::Pi, Var::Gen] } else { vec![Var::SmallT, Var::Gen] };
    prop_oneof![
        (0u64..50).prop_map(ExprKind::Int),
        proptest::sample::select(vars).prop_map(ExprKind::Var),
    ]
    .prop_map(|k| Expr::new(k, Pos::default()))
    .boxed()
}

fn expr(mixed: bool) -> impl Strategy<Value = Expr> {
    leaf(mixed).prop_recursive(5, 40, 2, |inner| {
        let op = proptest::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]);
        prop_oneof![
            inner.clone().prop_map(|x| ExprKind::Neg(Box::new(x))),
            (inner.clone(), -5i64..6).prop_map(|(x, e)| ExprKind::Pow(Box::new(x), e)),
            (op, inner.clone(), inner).prop_map(|(o, a, b)| ExprKind::Bin(o, Box::new(a), Box::new(b))),
        ]
        .prop_map(|k| Expr::new(k, Pos::default()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(e in expr(true)) {
        let text = e.to_string();
        let back = parse_expression(&text, Mode::Mixed).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn charp_expressions_round_trip(e in expr(false)) {
        let text = e.to_string();
        prop_assert_eq!(parse_expression(&text, Mode::CharP).unwrap(), e);
    }
}

#[test]
fn precedence() {
    let e = parse_expression("-T^2*l + 1/pi/pi", Mode::Mixed).unwrap();
    assert_eq!(e.to_string(), "-T^2*l + 1/pi/pi");
    let ExprKind::Bin(BinOp::Add, a, b) = &e.kind else { panic!("{e:?}") };
    assert!(matches!(&a.kind, ExprKind::Bin(BinOp::Mul, x, _) if matches!(x.kind, ExprKind::Neg(_))));
    assert!(matches!(&b.kind, ExprKind::Bin(BinOp::Div, x, _) if matches!(x.kind, ExprKind::Bin(BinOp::Div, ..))));
    assert_eq!(parse_expression("(T - 1) - (T - 1)", Mode::Mixed).unwrap().to_string(), "T - 1 - (T - 1)");
    assert_eq!(parse_expression("(-T)^2", Mode::Mixed).unwrap().to_string(), "(-T)^2");
}

#[test]
fn document_round_trip() {
    let src = "\
mode charp p=5 f=2 window=-10:10
g = t^2/(1 + a1*t)
config C {
  component A = mu_p(g) + etale(1/t) marked 0 inf
  component B
  node A@1:mu_p B@0
}
conductor mu_p(g) at 1
kummerian C
";
    let doc = parse_document(src).unwrap();
    let printed = doc.to_string();
    let again = parse_document(&printed).unwrap();
    assert_eq!(again.to_string(), printed);
}

fn err(src: &str) -> rankp_cli::SyntaxError {
    parse_document(src).expect_err(src)
}

#[test]
fn syntax_errors_have_positions() {
    let e = err("mode mixed p=3\nu = (1 + T\n");
    assert_eq!((e.class, e.pos.line), (ErrorClass::Syntax, 2));
    let e = err("mode mixed p=3\nu = 2 T\n");
    assert_eq!((e.class, e.pos.line, e.pos.col), (ErrorClass::Syntax, 2, 7));
    let e = err("mode mixed p=3\nu = T^x\n");
    assert_eq!(e.class, ErrorClass::Syntax);
    let e = err("mode mixed p=3\nfrobnicate T\n");
    assert_eq!((e.class, e.pos.line, e.pos.col), (ErrorClass::Syntax, 2, 1));
    let e = err("classify T\n");
    assert_eq!(e.pos.line, 1);
}

#[test]
fn type_errors() {
    for (src, line) in [
        ("mode charp p=3\nu = pi + t\n", 2),
        ("mode charp p=3\n\nclassify t\n", 3),
        ("mode mixed p=3\nu = t*T\n", 2),
        ("mode mixed p=3\nconductor mu_p(t) at 0\n", 2),
    ] {
        let e = err(src);
        assert_eq!((e.class, e.pos.line), (ErrorClass::Type, line), "{src}: {e}");
    }
}
