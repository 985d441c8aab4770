//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line.

use cutstream_cli::accept;

fn check(r: accept::CriterionResult) {
    println!("{}", r.line());
    assert!(r.pass, "{}", r.line());
}

#[test]
fn criterion_1_approx_min_cut() {
    check(accept::criterion_1_approx_min_cut());
}

#[test]
fn criterion_2_foreach_query_contract() {
    check(accept::criterion_2_foreach_query_contract());
}

#[test]
fn criterion_3_space_scaling() {
    check(accept::criterion_3_space_scaling());
}

#[test]
fn criterion_4_random_order_exact() {
    check(accept::criterion_4_random_order_exact());
}

#[test]
fn criterion_5_prefix_concentration() {
    check(accept::criterion_5_prefix_concentration());
}

#[test]
fn criterion_6_all_pairs_er() {
    check(accept::criterion_6_all_pairs_er());
}

#[test]
fn criterion_7_cycle_decomposition() {
    check(accept::criterion_7_cycle_decomposition());
}

#[test]
fn criterion_8_contraction_enumeration() {
    check(accept::criterion_8_contraction_enumeration());
}

#[test]
fn criterion_9_gadgets() {
    check(accept::criterion_9_gadgets());
}
