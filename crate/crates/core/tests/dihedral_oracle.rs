mod common;

use common::oracle::{agree, x1_oracle};

#[test]
fn oracle_matches_known_curves() {
    let x5 = x1_oracle(5);
    assert_eq!((x5.degree, x5.genus), (12, 0));
    assert_eq!(x5.cusp_widths, vec![1, 1, 5, 5]);
    assert_eq!(x1_oracle(7).genus, 0);
    assert_eq!(x1_oracle(11).genus, 1);
    assert_eq!(x1_oracle(13).genus, 2);
    let x25 = x1_oracle(25);
    assert_eq!(
        (x25.degree, x25.cusp_widths.len(), x25.genus),
        (300, 28, 12)
    );
}

#[test]
fn d5_matches_x1_5() {
    agree(5, 0);
}

#[test]
fn d7_matches_x1_7() {
    agree(7, 0);
}

#[test]
fn d11_matches_x1_11() {
    let c = agree(11, 0);
    assert_eq!(c.genus, 1);
}

#[test]
fn d25_matches_x1_25() {
    let c = agree(5, 1);
    assert_eq!(c.genus, 12);
}
