//! Property tests against independent oracles.

mod common;

use common::*;

#[test]
fn lll_output_is_reduced_and_spans_the_same_lattice() {
    run(200, lattice_strategy(8, 30), check_lll).unwrap();
}

#[test]
fn lattice_lower_bound_exhaustive_small_dimensions() {
    let n = exhaustive_lower_bounds_dim2().unwrap();
    assert!(n > 1000);
}

#[test]
fn lattice_lower_bound_random_dimensions_three_and_four() {
    run(60, lower_bound_strategy(), |(c, y)| check_lower_bound(&c, &y)).unwrap();
}

#[test]
fn padic_log_is_additive_and_preserves_valuation_near_one() {
    run(500, padic_strategy(), check_padic).unwrap();
}

#[test]
fn pdw_bound_dominates_largest_root() {
    run(100, pdw_strategy(), check_pdw).unwrap();
}

#[test]
fn heights_of_quadratic_irrationals_match_and_exceed_lower_bound() {
    run(200, height_strategy(), check_height).unwrap();
}

#[test]
fn growth_bounds_on_random_instances() {
    run(24, recurrence_strategy(), |(a, b, u0, u1, w)| check_growth_bounds(&small_instance(a, b, u0, u1, w), 300))
        .unwrap();
}

#[test]
fn growth_bounds_on_desk_instances() {
    for (_, inst) in desk_instances() {
        check_growth_bounds(&inst, 300).unwrap();
    }
}

#[test]
fn small_solutions_lie_inside_the_initial_box() {
    for (_, inst) in desk_instances() {
        check_initial_box(&inst).unwrap();
    }
}
