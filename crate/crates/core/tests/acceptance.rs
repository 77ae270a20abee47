//! Acceptance criteria, one PASS/FAIL line each. Finite-group answers are
//! compared against a brute-force oracle that evaluates sequence terms with
//! raw residue arithmetic and shares no code with the library's membership
//! or radical routines.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use charsub::classify::{autochar_verdict, compact_factors, eo_descriptor, exp_descriptor, factors_finite, not_t_characterizable, scale_factors, ExtendedExponent};
use charsub::construct::{claim_lift, dense_enum_zero_characterizer, k_characterize_open_finite_index, quotient_lift, Quotient};
use charsub::corpus::{dual_characters, groups_up_to, periodic_by_index, subgroups};
use charsub::expr::parse_group;
use charsub::groups::circle::{CertifiedInterval, CirclePoint, CircleValue};
use charsub::groups::finite::{FiniteAbelian, FiniteSubgroup};
use charsub::groups::{Character, Element, GroupDescriptor};
use charsub::membership::{is_autochar_witness, member, s_v_finite, Autochar, Certificate, Limits, Verdict};
use charsub::radicals::{radical_circle, radical_finite, radical_finite_seq, RadicalPresentation};
use charsub::sequences::CharSequence;
use charsub::verify::random_small_point;

const CAP: u64 = 1 << 20;
const SEED: u64 = 20_240_601;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn lib<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Brute-force oracle on finite groups.

/// A finite group as raw invariant factors; characters and elements are
/// indices into the mixed-radix enumeration.
struct Raw {
    factors: Vec<u64>,
    exponent: u64,
    order: usize,
}

impl Raw {
    fn new(g: &FiniteAbelian) -> Self {
        let factors = g.factors().to_vec();
        let exponent = factors.iter().fold(1, |a, &d| a.lcm(&d));
        let order = factors.iter().product::<u64>() as usize;
        Raw { factors, exponent, order }
    }

    /// Mixed radix, first coordinate least significant.
    fn digits(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (k, &d) in self.factors.iter().enumerate() {
            out[k] = (i % d as usize) as u64;
            i /= d as usize;
        }
        out
    }

    /// `χ(x)` as a numerator over the exponent.
    fn pair(&self, chi: usize, x: usize) -> u64 {
        let (c, y) = (self.digits(chi), self.digits(x));
        c.iter()
            .zip(&y)
            .zip(&self.factors)
            .map(|((a, b), d)| a * b % d * (self.exponent / d))
            .sum::<u64>()
            % self.exponent
    }

    /// Membership vector of `s_w`: in a finite group `w_n(x) → 0` means
    /// `w_n(x) = 0` for every `n` past the prefix, i.e. over one full cycle.
    fn s(&self, w: &Word) -> Vec<bool> {
        (0..self.order).map(|x| w.cycle.iter().all(|&c| self.pair(c, x) == 0)).collect()
    }

    /// Membership vector of the radical: every occurring character vanishes.
    fn n(&self, w: &Word) -> Vec<bool> {
        (0..self.order).map(|x| w.prefix.iter().chain(&w.cycle).all(|&c| self.pair(c, x) == 0)).collect()
    }
}

/// An eventually periodic word of character indices.
#[derive(Clone)]
struct Word {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl Word {
    fn term(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// `w_{2n} = u_n`, `w_{2n+1} = v_n`, materialized term by term.
    fn interleave(u: &Word, v: &Word) -> Word {
        let p = 2 * u.prefix.len().max(v.prefix.len());
        let l = 2 * u.cycle.len().lcm(&v.cycle.len());
        let term = |n: usize| if n % 2 == 0 { u.term(n / 2) } else { v.term(n / 2) };
        Word { prefix: (0..p).map(term).collect(), cycle: (p..p + l).map(term).collect() }
    }

    fn to_seq(&self, g: &FiniteAbelian) -> CharSequence {
        periodic_by_index(g, &self.prefix, &self.cycle)
    }
}

fn same_set(g: &FiniteAbelian, sub: &FiniteSubgroup, oracle: &[bool]) -> bool {
    oracle.iter().enumerate().all(|(i, &b)| sub.contains(&g.element_at(i)) == b)
}

/// Sequences exercised per group: every cycle of length ≤ 3 while that is
/// at most a few thousand words, every cycle of length ≤ 2 above that,
/// seeded length-3 cycles, and seeded prefixes.
fn finite_corpus(g: &FiniteAbelian, rng: &mut ChaCha8Rng) -> Vec<Word> {
    let n = g.order() as usize;
    let max_len = if n <= 16 { 3 } else { 2 };
    let mut words: Vec<Word> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|c| (0..n).map(move |i| [c.as_slice(), &[i]].concat())).collect();
        words.extend(layer.iter().map(|c| Word { prefix: Vec::new(), cycle: c.clone() }));
    }
    for _ in 0..200 {
        let p = rng.gen_range(0..=2);
        let c = rng.gen_range(1..=3);
        words.push(Word {
            prefix: (0..p).map(|_| rng.gen_range(0..n)).collect(),
            cycle: (0..c).map(|_| rng.gen_range(0..n)).collect(),
        });
    }
    words
}

// ---------------------------------------------------------------------------
// Criteria.

fn claim_lift_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..500 {
        let m = rng.gen_range(2..=12u64);
        let a = random_small_point(&mut rng, m);
        let bound = BigRational::new(BigInt::one(), BigInt::from(m * m));
        ensure!(a.norm() < bound, "generator produced ‖a‖ ≥ 1/m² at case {i}");
        let b = lib(claim_lift(&a, m))?;
        // independent arithmetic on the raw representative
        let frac = |r: &BigRational| r - r.floor();
        let dist = |r: &BigRational| {
            let f = frac(r);
            let g = BigRational::one() - &f;
            if f < g { f } else { g }
        };
        let mb = b.value() * BigRational::from_integer(m.into());
        ensure!(frac(&mb) == frac(a.value()), "case {i}: m·b ≠ a for a = {a}, m = {m}");
        for k in 1..m {
            let kb = b.value() * BigRational::from_integer(k.into());
            ensure!(dist(&kb) > bound, "case {i}: ‖{k}b‖ ≤ 1/m² for a = {a}, m = {m}");
        }
    }
    Ok("500 cases".into())
}

fn interleave_intersection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pairs_checked = 0u64;
    for g in groups_up_to(64) {
        let raw = Raw::new(&g);
        let n = raw.order;
        let mut cache: HashMap<Vec<usize>, FiniteSubgroup> = HashMap::new();
        let mut su = |w: &Word| -> std::result::Result<FiniteSubgroup, String> {
            let key = [w.prefix.clone(), vec![usize::MAX], w.cycle.clone()].concat();
            if let Some(s) = cache.get(&key) {
                return Ok(s.clone());
            }
            let s = lib(s_v_finite(&g, &w.to_seq(&g), CAP))?;
            cache.insert(key, s.clone());
            Ok(s)
        };
        let single = |i: usize| Word { prefix: Vec::new(), cycle: vec![i] };
        let mut pairs: Vec<(Word, Word)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                pairs.push((single(i), single(j)));
            }
        }
        if n <= 4 {
            let corpus = finite_corpus(&g, &mut rng);
            for u in &corpus {
                for v in &corpus {
                    pairs.push((u.clone(), v.clone()));
                }
            }
        } else {
            let corpus = finite_corpus(&g, &mut rng);
            for _ in 0..300 {
                let u = corpus[rng.gen_range(0..corpus.len())].clone();
                let v = corpus[rng.gen_range(0..corpus.len())].clone();
                pairs.push((u, v));
            }
        }
        for (u, v) in pairs {
            let w = lib(CharSequence::interleave(&u.to_seq(&g), &v.to_seq(&g)))?;
            let sw = lib(s_v_finite(&g, &w, CAP))?;
            let meet = lib(su(&u)?.intersect(&su(&v)?))?;
            ensure!(sw == meet, "{g}: s_w = {sw} but s_u ∩ s_v = {meet} for {w}");
            let oracle_w = raw.s(&Word::interleave(&u, &v));
            let (ou, ov) = (raw.s(&u), raw.s(&v));
            ensure!(same_set(&g, &sw, &oracle_w), "{g}: library s_w disagrees with the oracle for {w}");
            ensure!(
                oracle_w.iter().zip(ou.iter().zip(&ov)).all(|(&w, (&a, &b))| w == (a && b)),
                "{g}: oracle interleave is not the intersection for {w}"
            );
            pairs_checked += 1;
        }
    }
    Ok(format!("{pairs_checked} pairs"))
}

fn radical_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut words_checked = 0u64;
    for g in groups_up_to(64) {
        let raw = Raw::new(&g);
        for w in finite_corpus(&g, &mut rng) {
            let seq = w.to_seq(&g);
            let RadicalPresentation::Finite(nv) = lib(radical_finite_seq(&g, &seq, CAP))?.presentation else {
                return Err("finite radical expected".into());
            };
            let sv = lib(s_v_finite(&g, &seq, CAP))?;
            ensure!(lib(nv.is_subset_of(&sv))?, "{g}: n_v = {nv} ⊄ s_v = {sv} for {seq}");
            let (on, os) = (raw.n(&w), raw.s(&w));
            ensure!(same_set(&g, &nv, &on), "{g}: radical disagrees with the oracle for {seq}");
            ensure!(on.iter().zip(&os).all(|(&a, &b)| !a || b), "{g}: oracle radical not inside s_v for {seq}");
            words_checked += 1;
        }
    }

    // on 𝕋 the radical is 𝕋[d] with d the gcd of the integer multipliers
    let limits = Limits::default();
    let mut families: Vec<(CharSequence, Vec<BigInt>)> = Vec::new();
    let mut fact = vec![BigInt::one()];
    let mut fib = vec![BigInt::one(), BigInt::one()];
    for n in 1..30u32 {
        fact.push(&fact[n as usize - 1] * BigInt::from(n + 1));
        fib.push(&fib[n as usize] + &fib[n as usize - 1]);
    }
    families.push((CharSequence::factorial(), fact));
    families.push((CharSequence::fibonacci(), fib));
    for (c, q) in [(1i64, 2i64), (3, 2), (6, 5), (4, 10), (12, 3)] {
        let seq = lib(CharSequence::geometric(GroupDescriptor::Circle, BigRational::from_integer(c.into()), q))?;
        let terms = (0..30u32).map(|n| BigInt::from(c) * BigInt::from(q).pow(n)).collect();
        families.push((seq, terms));
    }
    let mut points = 0;
    for (seq, terms) in &families {
        let d = terms.iter().fold(BigInt::zero(), |a, t| a.gcd(t)).abs();
        let RadicalPresentation::Circle(got) = lib(radical_circle(seq))?.presentation else {
            return Err(format!("circle radical expected for {seq}"));
        };
        ensure!(got == d, "radical of {seq} is T[{got}], oracle says T[{d}]");
        let d: i64 = lib(i64::try_from(d.clone()))?;
        for k in 0..d {
            let x = Element::Circle(CircleValue::Exact(CirclePoint::from_ratio(k, d)));
            let v = lib(member(&GroupDescriptor::Circle, seq, &x, &limits))?;
            ensure!(
                matches!(v, Verdict::ProvenIn(Certificate::Vanishing { .. })),
                "{seq}: radical point {k}/{d} has verdict {v}"
            );
            ensure!(lib(v.replay(&GroupDescriptor::Circle, seq, &x, &limits, 40))?, "{seq}: certificate for {k}/{d} does not replay");
            points += 1;
        }
    }
    Ok(format!("{words_checked} finite sequences, {points} certified circle points"))
}

fn finite_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut checked = 0u64;
    for g in groups_up_to(64) {
        let raw = Raw::new(&g);
        for w in finite_corpus(&g, &mut rng) {
            let seq = w.to_seq(&g);
            let support = seq.support_partition();
            let gamma: Vec<Vec<u64>> = lib(support.gamma_inf().ok_or("Γ^∞ unavailable"))?
                .iter()
                .map(|c| match c {
                    Character::Residues(r) => Ok(r.clone()),
                    other => Err(format!("non-residue character {other:?}")),
                })
                .collect::<std::result::Result<_, _>>()?;
            let RadicalPresentation::Finite(rad) = lib(radical_finite(&g, &gamma, CAP))?.presentation else {
                return Err("finite radical expected".into());
            };
            let sv = lib(s_v_finite(&g, &seq, CAP))?;
            ensure!(sv == rad, "{g}: s_v = {sv}, radical of Γ^∞ = {rad} for {seq}");
            ensure!(same_set(&g, &sv, &raw.s(&w)), "{g}: s_v disagrees with the oracle for {seq}");
            checked += 1;
        }
    }
    Ok(format!("{checked} sequences"))
}

fn quotient_correspondence() -> Outcome {
    let mut instances = 0u64;
    for g in groups_up_to(32) {
        let raw = Raw::new(&g);
        for f in lib(subgroups(&g, CAP))? {
            let q = lib(Quotient::new(&g, &f))?;
            let elements = lib(g.elements(CAP))?;
            // π is onto with kernel F
            let kernel: Vec<bool> = elements.iter().map(|x| q.project(x).iter().all(|&c| c == 0)).collect();
            ensure!(same_set(&g, &f, &kernel), "{g}/{f}: kernel of the projection is not F");
            let image: std::collections::HashSet<Vec<u64>> = elements.iter().map(|x| q.project(x)).collect();
            ensure!(image.len() as u64 == q.group.order(), "{g}/{f}: projection is not onto");
            let qraw = Raw::new(&q.group);
            for (ci, chi) in dual_characters(&q.group).into_iter().enumerate() {
                let u = lib(CharSequence::periodic(GroupDescriptor::Finite(q.group.clone()), vec![], vec![chi]))?;
                let lift = lib(quotient_lift(&q, &u, CAP))?;
                let sv = lib(s_v_finite(&g, &lift.sequence, CAP))?;
                for x in &elements {
                    let in_su = qraw.pair(ci, q.group.index_of(&q.project(x))) == 0;
                    ensure!(sv.contains(x) == in_su, "{g}/{f}, u = {u}: s_v and π⁻¹(s_u) differ at {x:?}");
                }
                // the lifted character is χ∘π, checked pointwise with raw pairings
                let Some((_, cycle)) = lift.sequence.eventually_periodic_form() else {
                    return Err("lift is not periodic".into());
                };
                for psi in &cycle {
                    let Character::Residues(r) = psi else { return Err("non-residue lift".into()) };
                    let pi = g.index_of(r);
                    for (xi, x) in elements.iter().enumerate() {
                        let lhs = BigRational::new(raw.pair(pi, xi).into(), raw.exponent.into());
                        let rhs = BigRational::new(qraw.pair(ci, q.group.index_of(&q.project(x))).into(), qraw.exponent.into());
                        ensure!(lhs == rhs, "{g}/{f}: lifted character differs from χ∘π at {x:?}");
                    }
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} (X, F, u) instances"))
}

fn k_characterization() -> Outcome {
    let limits = Limits::default();
    let g = GroupDescriptor::Integers;
    for m in [2u64, 3, 4, 6, 12] {
        let k = lib(k_characterize_open_finite_index(m, None, &limits))?;
        let check = lib(k.verify(1000, 1000, &limits))?;
        ensure!(check.passed(), "m = {m}: {check:?}");
        for j in -1000i64..=1000 {
            let x = Element::Integer(j.into());
            let v = lib(member(&g, &k.sequence, &x, &limits))?;
            ensure!(v.is_in() == (j % m as i64 == 0) && !v.is_undecided(), "m = {m}, k = {j}: {v}");
            ensure!(lib(v.replay(&g, &k.sequence, &x, &limits, 16))?, "m = {m}, k = {j}: certificate does not replay");
        }
    }
    Ok("m ∈ {2,3,4,6,12}, |k| ≤ 1000".into())
}

fn dense_enumeration() -> Outcome {
    let limits = Limits::default();
    let g = GroupDescriptor::Circle;
    let seq = dense_enum_zero_characterizer();
    let zero = Element::Circle(CircleValue::Exact(CirclePoint::zero()));
    let v0 = lib(member(&g, &seq, &zero, &limits))?;
    ensure!(v0.is_in(), "0 has verdict {v0}");
    let mut count = 0;
    for q in 1..=50i64 {
        for a in 1..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            let x = Element::Circle(CircleValue::Exact(CirclePoint::from_ratio(a, q)));
            let v = lib(member(&g, &seq, &x, &limits))?;
            let Verdict::ProvenNotIn(Certificate::Escape { norm_floor, .. }) = &v else {
                return Err(format!("{a}/{q} has verdict {v}"));
            };
            ensure!(norm_floor.is_positive(), "{a}/{q}: non-positive floor");
            ensure!(lib(v.replay(&g, &seq, &x, &limits, 64))?, "{a}/{q}: escape certificate does not replay");
            count += 1;
        }
    }
    Ok(format!("{count} non-zero points refuted, 0 accepted"))
}

fn autocharacterization() -> Outcome {
    let limits = Limits::default();
    let mut cases: Vec<(GroupDescriptor, CharSequence)> = vec![
        (GroupDescriptor::Reals, CharSequence::harmonic()),
        (GroupDescriptor::Integers, lib(CharSequence::geometric(GroupDescriptor::Integers, BigRational::one(), 2))?),
    ];
    for p in [2u64, 3, 5] {
        let g = lib(GroupDescriptor::padic(p))?;
        cases.push((g.clone(), lib(CharSequence::geometric(g, BigRational::one(), p))?));
    }
    for (g, seq) in &cases {
        let Autochar::Confirmed { samples, .. } = lib(is_autochar_witness(g, seq, &limits))? else {
            return Err(format!("{seq} not confirmed on {g}"));
        };
        for (x, v) in &samples {
            ensure!(v.is_in(), "{g}: sample has verdict {v}");
            ensure!(lib(v.replay(g, seq, x, &limits, 16))?, "{g}: certificate does not replay");
        }
        ensure!(lib(autochar_verdict(g, &limits))?.autocharacterized, "{g}: verdict is not autocharacterized");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut refuted = 0;
    for g in groups_up_to(64) {
        let d = GroupDescriptor::Finite(g.clone());
        ensure!(!lib(autochar_verdict(&d, &limits))?.autocharacterized, "{g} reported autocharacterized");
        if g.is_trivial() {
            refuted += 1;
            continue;
        }
        let raw = Raw::new(&g);
        let n = raw.order;
        for _ in 0..3 {
            let mut w = Word { prefix: vec![], cycle: (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect() };
            w.cycle[0] = rng.gen_range(1..n);
            let seq = w.to_seq(&g);
            let Autochar::Refuted { witness: Some((x, v)), .. } = lib(is_autochar_witness(&d, &seq, &limits))? else {
                return Err(format!("{seq} not refuted on {g}"));
            };
            let Element::Residues(r) = &x else { return Err("non-residue witness".into()) };
            ensure!(v.is_not_in() && !raw.s(&w)[g.index_of(r)], "{g}: witness {x:?} is in s_v by the oracle");
        }
        refuted += 1;
    }
    Ok(format!("R, Z, Q_2, Q_3, Q_5 confirmed; {refuted} finite groups refuted"))
}

fn eo_exp() -> Outcome {
    let g = lib(parse_group("Z(3)^1 x Z(2)^N"))?;
    let v = lib(not_t_characterizable(&g))?;
    ensure!(v.eo == ExtendedExponent(2) && v.exp == ExtendedExponent(6), "eo {} exp {}", v.eo, v.exp);
    ensure!(v.eo < v.exp && v.not_t_characterizable, "criterion not met");
    let m = v.witness.ok_or("no witness")?;
    let image = scale_factors(&lib(compact_factors(&g))?, m);
    ensure!(factors_finite(&image) && !image.is_empty(), "{m}·G is not finite and non-trivial");
    for src in ["T^N", "Z(2)^N"] {
        let h = lib(parse_group(src))?;
        ensure!(!lib(not_t_characterizable(&h))?.not_t_characterizable, "{src} satisfies the criterion");
        ensure!(lib(eo_descriptor(&h))? >= lib(exp_descriptor(&h))?, "{src}: eo < exp");
    }
    Ok(format!("eo = 2 < 6 = exp, witness m = {m} gives {}", v.witness_image.unwrap_or_default()))
}

fn golden_ratio() -> Outcome {
    let x = Element::Circle(CircleValue::Interval(CertifiedInterval::golden_ratio()));
    let limits = Limits { horizon: 30, ..Limits::default() };
    let v = lib(member(&GroupDescriptor::Circle, &CharSequence::fibonacci(), &x, &limits))?;
    let Verdict::Undecided(ev) = &v else {
        return Err(format!("verdict {v}"));
    };
    let at30 = ev.trace.iter().find(|t| t.n == 30).ok_or("no trace point at n = 30")?;
    let bound = BigRational::new(1.into(), 1_000_000.into());
    ensure!(at30.upper < bound, "upper bound {} at n = 30", at30.upper);
    // oracle: ‖F_30·φ‖ = φ^{-30} up to sign, and φ^{-30} < 1/(1.6^30)
    let phi_inv_30_upper = BigRational::new(BigInt::from(10).pow(30), BigInt::from(16).pow(30));
    ensure!(at30.lower <= phi_inv_30_upper, "trace lower bound exceeds φ^-30");
    Ok(format!("‖F_30·φ‖ ≤ {:.3e}, undecided", ratio_f64(&at30.upper)))
}

fn ratio_f64(r: &BigRational) -> f64 {
    let scale = BigInt::from(10).pow(30);
    let scaled = (r * BigRational::from_integer(scale)).to_integer();
    scaled.to_string().parse::<f64>().unwrap_or(f64::NAN) * 1e-30
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("claim-lift", Some(5), claim_lift_suite),
        ("interleave = intersection", Some(60), interleave_intersection),
        ("radical bound", None, radical_bound),
        ("finite-group collapse", None, finite_collapse),
        ("quotient correspondence", Some(60), quotient_correspondence),
        ("K-characterization of mZ", Some(30), k_characterization),
        ("dense-enumeration characterizer", Some(10), dense_enumeration),
        ("autocharacterization verdicts", None, autocharacterization),
        ("eo/exp criterion", Some(1), eo_exp),
        ("golden-ratio evidence", Some(1), golden_ratio),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let over = budget.is_some_and(|b| elapsed > Duration::from_secs(b));
        let status = if outcome.is_ok() && !over { "PASS" } else { "FAIL" };
        let detail = match (&outcome, over) {
            (Err(e), _) => e.clone(),
            (Ok(d), true) => format!("{d}; over the {}s budget", budget.unwrap_or_default()),
            (Ok(d), false) => d.clone(),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {:>2} {name} ({:.2}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
