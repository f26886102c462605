//! The recurrence for `f` checked on fully expanded integers over the whole
//! grid. Slow (tens of seconds) because the values reach millions of bits.

use turan_lab::classify::{
    check_f_gap_factored, check_f_gap_with, derived_constants, f_factored_sequence, f_sequence,
    ThresholdConfig,
};

#[test]
fn expanded_and_factored_forms_agree() {
    for l in 1..=20u32 {
        for k in 1..=5u32 {
            for s in 2..=4 {
                let cfg = ThresholdConfig::exact(l, k, s).unwrap();
                let big = f_sequence(6, &cfg).unwrap();
                let fac = f_factored_sequence(6, &cfg).unwrap();
                assert_eq!(big[0], cfg.l().clone());
                for j in 2..=6 {
                    let d = derived_constants(j, &big[j - 2], &cfg).unwrap();
                    assert_eq!(d.f_from_constants(), big[j - 1], "L={l} K={k} s={s} j={j}");
                    assert_eq!(&d.n * &d.d, d.m);
                    assert!(check_f_gap_with(j, &big, &cfg).unwrap());
                    assert!(check_f_gap_factored(j, &fac, &cfg).unwrap());
                }
                // the top value is the expensive one; compare it once per cell
                assert_eq!(fac[5].to_biguint(), big[5], "L={l} K={k} s={s}");
            }
        }
    }
}
