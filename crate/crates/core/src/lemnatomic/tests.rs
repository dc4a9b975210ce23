use super::*;
use crate::lemniscate::{expand_roots, torsion_values, BigComplex};

fn g(s: &str) -> GaussInt {
    s.parse().unwrap()
}

fn strs(v: &[GaussInt]) -> Vec<String> {
    v.iter().map(|z| z.to_string()).collect()
}

#[test]
fn divisor_lists() {
    assert_eq!(strs(&divisors_up_to_units(&g("-3")).unwrap()), ["1", "-3"]);
    assert_eq!(strs(&divisors_up_to_units(&g("-1+2i").pow(2)).unwrap()), ["1", "-1+2i", "-3-4i"]);
    let d = divisors_up_to_units(&(&g("-3") * &g("-1+2i"))).unwrap();
    assert_eq!(strs(&d), ["1", "-1+2i", "-3", "3-6i"]);
    assert!(d.iter().all(|x| x.is_one() || x.is_primary()));
    assert!(divisors_up_to_units(&g("2")).is_err());
}

#[test]
fn small_mult_maps() {
    assert_eq!(mult_map(&g("1")).unwrap(), SlFieldElement::s());
    assert_eq!(mult_map(&g("i")).unwrap(), SlFieldElement::s().scale_s(&g("i")));
    // sl(2z) = 2 s c / (1 + s^4)
    let two = mult_map_pair(&g("2")).unwrap().s;
    let expected = SlFieldElement::new(PolyZi::zero(), PolyZi::from_ints(&[0, 2]), PolyZi::from_ints(&[1, 0, 0, 0, 1])).unwrap();
    assert_eq!(two, expected);
    // sl(-z) = -sl(z)
    assert_eq!(mult_map(&g("-1")).unwrap(), SlFieldElement::s().neg());
}

#[test]
fn odd_maps_are_c_free_with_norm_degree() {
    for b in ["-1+2i", "-3", "3+2i", "-1-2i", "1+4i", "-3-4i", "5+2i"] {
        let r = mult_map(&g(b)).unwrap();
        assert!(r.is_c_free());
        assert_eq!(r.numerator_pure().degree().unwrap() as u64, g(b).norm_u64().unwrap(), "β = {b}");
        // odd function of s: only odd powers in the numerator, even in the denominator
        assert!(r.numerator_pure().coeffs().iter().step_by(2).all(GaussInt::is_zero));
        assert!(r.denominator().coeffs().iter().skip(1).step_by(2).all(GaussInt::is_zero));
    }
}

#[test]
fn composition_matches_product() {
    let a = g("-1+2i");
    let b = g("-3");
    let direct = mult_map(&(&a * &b)).unwrap();
    let composed = mult_map(&a).unwrap().compose(&mult_map(&b).unwrap()).unwrap();
    assert_eq!(direct, composed);
}

#[test]
fn torsion_poly_small() {
    let t = all_torsion_poly(&g("-1+2i")).unwrap();
    assert_eq!(t.degree(), Some(5));
    assert!(t.coeff(0).is_zero());
    assert_eq!(t, &PolyZi::x() * &PolyZi::new(vec![g("-1+2i"), g("0"), g("0"), g("0"), g("1")]));
}

#[test]
fn torsion_poly_roots_match_numeric_values() {
    let bits = 200;
    let t = all_torsion_poly(&g("-3")).unwrap();
    let values = torsion_values(&g("-3"), bits, Exec::Sequential).unwrap();
    let roots: Vec<BigComplex> = values.into_iter().map(|v| v.value).collect();
    let expanded = expand_roots(&roots, bits);
    for (k, c) in expanded.iter().enumerate() {
        let exact = t.coeff(k);
        let diff = c.sub(&BigComplex::from_int(exact.re.clone(), exact.im.clone(), bits));
        assert!(diff.abs_below_pow2(-150), "coefficient {k}");
    }
}

#[test]
fn exact_lambda_values() {
    let mut cache = ExactCache::new();
    assert_eq!(cache.lemnatomic(&g("1")).unwrap(), PolyZi::x());
    assert_eq!(cache.lemnatomic(&g("-1+2i")).unwrap(), PolyZi::new(vec![g("-1+2i"), g("0"), g("0"), g("0"), g("1")]));
    assert_eq!(cache.lemnatomic(&g("-3")).unwrap(), PolyZi::from_ints(&[-3, 0, 0, 0, 6, 0, 0, 0, 1]));
    // associates give the same polynomial
    assert_eq!(cache.lemnatomic(&g("3")).unwrap(), cache.lemnatomic(&g("-3")).unwrap());
    assert!(cache.lemnatomic(&g("1+i")).is_err());
}

#[test]
fn product_identity_and_x4_structure() {
    let mut cache = ExactCache::new();
    for b in ["-1+2i", "-1-2i", "-3", "3+2i", "-3-4i"] {
        let beta = g(b);
        let t = all_torsion_poly(&beta).unwrap();
        let mut prod = PolyZi::one();
        let mut degree_sum = 0u64;
        for d in divisors_up_to_units(&beta).unwrap() {
            let l = cache.lemnatomic(&d).unwrap();
            degree_sum += if d.is_one() { 1 } else { phi_norm(&d).unwrap() };
            prod = &prod * &l;
        }
        assert_eq!(prod, t, "β = {b}");
        assert_eq!(degree_sum, beta.norm_u64().unwrap());
        let l = cache.lemnatomic(&beta).unwrap();
        for (k, c) in l.coeffs().iter().enumerate() {
            assert!(k % 4 == 0 || c.is_zero(), "Λ_{b} has X^{k}");
        }
    }
}

#[test]
fn pipelines_agree_small() {
    for b in ["-1+2i", "-3", "3+2i", "-3-4i", "1+4i"] {
        let r = compute_lemnatomic(&g(b), Method::Both, 256, Exec::default()).unwrap();
        assert_eq!(r.pipelines_agree, Some(true));
        r.validate().unwrap();
    }
}

#[test]
fn record_validation() {
    let r = compute_lemnatomic(&g("-3"), Method::Exact, 256, Exec::default()).unwrap();
    assert_eq!(r.degree, 8);
    r.validate().unwrap();
    let mut bad = r.clone();
    bad.checksum = "00".into();
    assert!(bad.validate().is_err());
    let mut bad = r.clone();
    bad.coefficients = PolyZi::from_ints(&[1, 1]);
    bad.checksum = content_checksum(&bad.beta, &bad.coefficients);
    assert!(bad.validate().is_err());
    let json = serde_json::to_string(&r).unwrap();
    let back: LemnatomicRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!("both".parse::<Method>().unwrap(), Method::Both);
    assert!("fast".parse::<Method>().is_err());
}
