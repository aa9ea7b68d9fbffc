#![allow(dead_code)]

use flexsys::eps_scalar::rat;
use flexsys::{EpsRational, ExternalNumber, Neutrix};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn scalar(rng: &mut impl Rng) -> EpsRational {
    let terms = rng.gen_range(0..=3);
    (0..terms).fold(EpsRational::zero(), |acc, _| {
        let den = rng.gen_range(1..=4);
        let num = rng.gen_range(-5..=5);
        &acc + &EpsRational::monomial(rat(num, den), rng.gen_range(-2..=3))
    })
}

pub fn zeroless_scalar(rng: &mut impl Rng) -> EpsRational {
    loop {
        let s = scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn neutrix(rng: &mut impl Rng) -> Neutrix {
    match rng.gen_range(0..20) {
        0..=1 => Neutrix::Zero,
        2 => Neutrix::Micro(1),
        3 => Neutrix::Micro(2),
        4 => Neutrix::Full,
        _ => {
            let k = rng.gen_range(-2..=3);
            if rng.gen_bool(0.5) {
                Neutrix::oslash(k)
            } else {
                Neutrix::pounds(k)
            }
        }
    }
}

pub fn bounded_neutrix(rng: &mut impl Rng) -> Neutrix {
    loop {
        let n = neutrix(rng);
        if n != Neutrix::Full {
            return n;
        }
    }
}

pub fn external(rng: &mut impl Rng) -> ExternalNumber {
    ExternalNumber::new(scalar(rng), neutrix(rng))
}

pub fn zeroless(rng: &mut impl Rng) -> ExternalNumber {
    loop {
        let x = ExternalNumber::new(zeroless_scalar(rng), bounded_neutrix(rng));
        if x.is_zeroless() {
            return x;
        }
    }
}

pub fn pick<T: Copy>(rng: &mut impl Rng, xs: &[T]) -> T {
    *xs.choose(rng).expect("nonempty")
}
