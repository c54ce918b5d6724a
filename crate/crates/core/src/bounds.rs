//! Worst-case efficiency bounds for the four adversary classes.
//!
//! The informed bounds come from integer programs over at most two repeated
//! x/y segment patterns. Each pattern `(lx, ly)` maps to a point
//! `(u, v) = (cost / len, gain / len)` where `gain = (1+alpha) lx + ly -
//! (2+alpha)`. A budget-exact mix of two patterns has `u = gamma` and its
//! efficiency is the length-weighted mean of `v` over `1 + alpha`, so the
//! program value is the lower convex envelope of the points at `gamma`,
//! together with single patterns that fit the budget outright.

use crate::error::{Error, Result};
use crate::game::{profile_from_description, Action, ActionProfile};
use crate::numeric::{ceil_guarded, min_y_length, pos, rational_approx, TOL};
use crate::policy::{budget_of, min_x_adversaries, x_defense_threshold};

/// Default cap on every segment length in the program search.
pub const DEFAULT_SEARCH_BOUND: usize = 100;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// Static uninformed bound on a k-ring.
pub fn su_bound(alpha: f64, gamma: f64, k: usize) -> f64 {
    let ka = k as f64 * alpha;
    if ka >= 1.0 || gamma < ka {
        return 1.0;
    }
    (1.0 - (k as f64 - 1.0) * alpha - alpha * gamma) / ((1.0 + alpha) * (1.0 - ka))
}

/// Dynamic uninformed bound on a k-ring.
pub fn du_bound(alpha: f64, gamma: f64, k: usize) -> f64 {
    if gamma > 0.0 && alpha < 1.0 / k as f64 {
        1.0 / (1.0 + alpha)
    } else {
        1.0
    }
}

/// Informed adversary class for the pattern programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Informed {
    Static,
    Dynamic,
}

/// Repeated segment patterns describing a ring profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentDescription {
    pub lx: Vec<usize>,
    pub ly: Vec<usize>,
    pub r: Vec<usize>,
    pub s: Vec<f64>,
}

impl SegmentDescription {
    pub fn total_length(&self) -> usize {
        (0..self.lx.len())
            .map(|j| self.r[j] * (self.lx[j] + self.ly[j]))
            .sum()
    }

    /// Profile with every pattern repeated `r[j] * m` times.
    pub fn profile(&self, m: usize) -> ActionProfile {
        let r: Vec<usize> = self.r.iter().map(|&v| v * m).collect();
        profile_from_description(&self.lx, &self.ly, &r)
    }

    /// Profile with each pattern appearing once.
    pub fn unit_profile(&self) -> ActionProfile {
        profile_from_description(&self.lx, &self.ly, &vec![1; self.lx.len()])
    }

    pub fn summary(&self) -> String {
        (0..self.lx.len())
            .map(|j| format!("{}x(x{}y{})", self.r[j], self.lx[j], self.ly[j]))
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    pub witness: Option<SegmentDescription>,
    pub search_bound: usize,
}

/// Adversaries one `(lx, ly)` pattern needs.
pub fn pattern_cost(kind: Informed, alpha: f64, lx: usize, ly: usize) -> usize {
    match kind {
        Informed::Static => {
            let y = ceil_guarded(alpha * (ly as f64 + 1.0)) as usize + 2;
            let x = ceil_guarded(pos(2.0 - alpha * (lx as f64 - 1.0)) / (1.0 + alpha)) as usize;
            y + x
        }
        Informed::Dynamic => {
            let defended = alpha < 0.5 && x_defense_threshold(alpha).is_none_or(|t| lx <= t);
            if defended {
                4
            } else {
                2
            }
        }
    }
}

/// `gamma (lx + ly) - cost`.
pub fn surplus(kind: Informed, alpha: f64, gamma: f64, lx: usize, ly: usize) -> f64 {
    gamma * (lx + ly) as f64 - pattern_cost(kind, alpha, lx, ly) as f64
}

fn pattern_gain(alpha: f64, lx: usize, ly: usize) -> f64 {
    (1.0 + alpha) * lx as f64 + ly as f64 - (2.0 + alpha)
}

/// Shortest admissible x segment in the programs.
pub fn min_x_length(alpha: f64) -> usize {
    if alpha == 0.0 {
        3
    } else {
        2
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    u: f64,
    v: f64,
    lx: usize,
    ly: usize,
}

fn pattern_points(kind: Informed, alpha: f64, search_bound: usize) -> Vec<Point> {
    let mut pts = Vec::new();
    for lx in min_x_length(alpha)..=search_bound {
        for ly in min_y_length(alpha)..=search_bound {
            let len = (lx + ly) as f64;
            pts.push(Point {
                u: pattern_cost(kind, alpha, lx, ly) as f64 / len,
                v: pattern_gain(alpha, lx, ly) / len,
                lx,
                ly,
            });
        }
    }
    pts
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u)
}

/// Lower convex hull, sorted by `u`.
fn lower_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    let mut hull: Vec<Point> = Vec::new();
    for p in pts {
        if hull.last().is_some_and(|h| (h.u - p.u).abs() <= 1e-15) {
            continue;
        }
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn solve(kind: Informed, alpha: f64, gamma: f64, search_bound: usize) -> Result<BoundResult> {
    check_alpha(alpha)?;
    check_gamma(gamma)?;
    let none = BoundResult {
        value: 1.0,
        witness: None,
        search_bound,
    };
    if gamma == 0.0 {
        return Ok(none);
    }
    let pts = pattern_points(kind, alpha, search_bound);
    if pts.is_empty() {
        return Ok(none);
    }
    let scale = 1.0 / (1.0 + alpha);

    let mut best: Option<(f64, SegmentDescription)> = None;
    let mut offer = |value: f64, desc: SegmentDescription| {
        if best.as_ref().is_none_or(|(b, _)| value < b - 1e-12) {
            best = Some((value, desc));
        }
    };

    for p in &pts {
        if p.u <= gamma + 1e-12 {
            offer(
                p.v * scale,
                SegmentDescription {
                    lx: vec![p.lx],
                    ly: vec![p.ly],
                    r: vec![1],
                    s: vec![surplus(kind, alpha, gamma, p.lx, p.ly)],
                },
            );
        }
    }

    let hull = lower_hull(pts);
    if let Some(w) = hull.windows(2).find(|w| w[0].u < gamma && gamma < w[1].u) {
        let (a, b) = (w[0], w[1]);
        let t = (gamma - a.u) / (b.u - a.u);
        let v = a.v + t * (b.v - a.v);
        let s1 = surplus(kind, alpha, gamma, a.lx, a.ly);
        let s2 = surplus(kind, alpha, gamma, b.lx, b.ly);
        let (num, den) = rational_approx(-s2 / s1, 1000);
        offer(
            v * scale,
            SegmentDescription {
                lx: vec![a.lx, b.lx],
                ly: vec![a.ly, b.ly],
                r: vec![num.max(1) as usize, den as usize],
                s: vec![s1, s2],
            },
        );
    }

    Ok(match best {
        Some((value, desc)) if value < 1.0 => BoundResult {
            value,
            witness: Some(desc),
            search_bound,
        },
        _ => none,
    })
}

/// Static informed bound.
pub fn si_bound(alpha: f64, gamma: f64, search_bound: usize) -> Result<BoundResult> {
    solve(Informed::Static, alpha, gamma, search_bound)
}

/// Dynamic informed bound.
pub fn di_bound(alpha: f64, gamma: f64, search_bound: usize) -> Result<BoundResult> {
    solve(Informed::Dynamic, alpha, gamma, search_bound)
}

/// Saturation quantities for the informed classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturation {
    pub l_star: usize,
    pub value: f64,
    pub gamma_si: f64,
    pub gamma_di: f64,
}

pub fn saturation(alpha: f64) -> Saturation {
    let l_star = min_y_length(alpha);
    let l = l_star as f64;
    let value = (l + alpha) / ((1.0 + alpha) * (l + 2.0));
    let x_need = ceil_guarded((2.0 - alpha) / (1.0 + alpha)) as f64;
    let gamma_si = (l + x_need) / (l + 2.0);
    let gamma_di = (2.0 + if alpha < 0.5 { 2.0 } else { 0.0 }) / (l + 2.0);
    Saturation {
        l_star,
        value,
        gamma_si,
        gamma_di,
    }
}

/// Closed form for the static informed bound: exact below `gamma = alpha`,
/// an upper bound above it.
pub fn si_closed_form(alpha: f64, gamma: f64) -> f64 {
    if gamma <= alpha {
        return 1.0 - gamma / (1.0 + alpha);
    }
    let l = min_y_length(alpha) as f64;
    (gamma - alpha) * (l + alpha) / ((1.0 + alpha) * (1.0 - alpha) * (l + 2.0))
        + (1.0 - gamma) / ((1.0 + alpha) * (1.0 - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    DynamicUninformedStronger,
    InformedStaticStronger,
    Equal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::DynamicUninformedStronger => "dynamic-uninformed-stronger",
            Verdict::InformedStaticStronger => "informed-static-stronger",
            Verdict::Equal => "equal",
        }
    }
}

/// Which of the dynamic uninformed and static informed adversaries does more
/// damage (lower efficiency) on the ring.
pub fn comparison(alpha: f64, gamma: f64) -> Verdict {
    let du = du_bound(alpha, gamma, 1);
    let si = si_closed_form(alpha, gamma);
    if (du - si).abs() <= TOL {
        Verdict::Equal
    } else if du < si {
        Verdict::DynamicUninformedStronger
    } else {
        Verdict::InformedStaticStronger
    }
}

/// Least efficient stabilizable target on a ring of `n` agents.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstTarget {
    pub profile: ActionProfile,
    pub efficiency: f64,
    pub adversaries: usize,
}

fn segment_cost_x(kind: Informed, alpha: f64, lx: usize) -> usize {
    match kind {
        Informed::Static => min_x_adversaries(lx, alpha).unwrap_or(usize::MAX / 4),
        Informed::Dynamic => {
            if alpha < 0.5 && x_defense_threshold(alpha).is_none_or(|t| lx <= t) {
                2
            } else {
                0
            }
        }
    }
}

fn segment_cost_y(kind: Informed, alpha: f64, ly: usize) -> usize {
    match kind {
        Informed::Static => ceil_guarded(alpha * (ly as f64 + 1.0)) as usize + 2,
        Informed::Dynamic => 2,
    }
}

/// `table[m][len]`: fewest adversaries to split `len` agents into `m`
/// segments of length at least `min_len`, with the choice of last segment.
fn split_table(n: usize, max_m: usize, min_len: usize, cost: impl Fn(usize) -> usize) -> Vec<Vec<(usize, usize)>> {
    const INF: usize = usize::MAX / 2;
    let mut t = vec![vec![(INF, 0); n + 1]; max_m + 1];
    t[0][0] = (0, 0);
    for m in 1..=max_m {
        for len in (m * min_len)..=n {
            let mut best = (INF, 0);
            for last in min_len..=len {
                let prev = t[m - 1][len - last].0;
                if prev >= INF {
                    continue;
                }
                let c = prev + cost(last);
                if c < best.0 {
                    best = (c, last);
                }
            }
            t[m][len] = best;
        }
    }
    t
}

fn unwind(t: &[Vec<(usize, usize)>], mut m: usize, mut len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while m > 0 {
        let last = t[m][len].1;
        out.push(last);
        len -= last;
        m -= 1;
    }
    out.reverse();
    out
}

/// Finite-ring counterpart of the informed programs: the profile of least
/// welfare whose stabilizing placement fits in `floor(gamma n)` adversaries.
/// Dynamic placements carry one extra offensive adversary and may also aim
/// at all-y. Returns all-x when nothing damaging fits.
pub fn worst_target(kind: Informed, n: usize, alpha: f64, gamma: f64) -> Result<WorstTarget> {
    check_alpha(alpha)?;
    check_gamma(gamma)?;
    let budget = budget_of(gamma, n);
    let mut best = WorstTarget {
        profile: ActionProfile::all_x(n),
        efficiency: 1.0,
        adversaries: 0,
    };
    if kind == Informed::Dynamic {
        // all-y under the aggressive policy: both run ends defended plus one
        // offensive adversary; stable while leaving it costs more than the
        // 1 + 2 alpha needed to return
        let exit = 2.0 + (n as f64 - 3.0) * (1.0 - alpha);
        if n >= 3 && budget >= 3 && exit > 1.0 + 2.0 * alpha + TOL {
            best = WorstTarget {
                profile: ActionProfile::all_y(n),
                efficiency: 1.0 / (1.0 + alpha),
                adversaries: 3,
            };
        }
    }
    let (min_x, min_y) = (2, min_y_length(alpha));
    let max_m = n / (min_x + min_y);
    if max_m == 0 {
        return Ok(best);
    }
    let fx = split_table(n, max_m, min_x, |l| segment_cost_x(kind, alpha, l));
    let fy = split_table(n, max_m, min_y, |l| segment_cost_y(kind, alpha, l));
    let reserve = usize::from(kind == Informed::Dynamic);
    let mut best_key: Option<(f64, usize)> = None;
    let mut choice = (0, 0);
    for m in 1..=max_m {
        for lx_total in (m * min_x)..=(n - m * min_y) {
            let ly_total = n - lx_total;
            let cost = fx[m][lx_total].0.saturating_add(fy[m][ly_total].0).saturating_add(reserve);
            if cost > budget {
                continue;
            }
            let g = (1.0 + alpha) * lx_total as f64 + ly_total as f64 - (2.0 + alpha) * m as f64;
            let better = match best_key {
                None => true,
                Some((bg, bc)) => g < bg - 1e-12 || ((g - bg).abs() <= 1e-12 && cost < bc),
            };
            if better {
                best_key = Some((g, cost));
                choice = (m, lx_total);
            }
        }
    }
    if let Some((g, cost)) = best_key {
        let (m, lx_total) = choice;
        let xs = unwind(&fx, m, lx_total);
        let ys = unwind(&fy, m, n - lx_total);
        let mut acts = Vec::with_capacity(n);
        for j in 0..m {
            acts.extend(std::iter::repeat_n(Action::X, xs[j]));
            acts.extend(std::iter::repeat_n(Action::Y, ys[j]));
        }
        let efficiency = g / ((1.0 + alpha) * n as f64);
        if efficiency < best.efficiency - 1e-12 {
            best = WorstTarget {
                profile: ActionProfile::new(acts),
                efficiency,
                adversaries: cost,
            };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su_examples() {
        assert_eq!(su_bound(0.5, 0.3, 1), 1.0);
        assert!((su_bound(0.5, 1.0, 1) - 2.0 / 3.0).abs() < 1e-12);
        assert!((su_bound(0.2, 0.5, 2) - 0.7 / 0.72).abs() < 1e-12);
        assert!((su_bound(0.2, 0.5, 2) - 0.9722).abs() < 1e-4);
        assert_eq!(su_bound(0.6, 1.0, 2), 1.0);
    }

    #[test]
    fn du_examples() {
        assert!((du_bound(0.3, 0.1, 1) - 0.7692).abs() < 1e-4);
        assert_eq!(du_bound(0.7, 1.0, 2), 1.0);
        assert_eq!(du_bound(0.4, 0.0, 3), 1.0);
    }

    #[test]
    fn saturation_at_half() {
        let s = saturation(0.5);
        assert_eq!(s.l_star, 5);
        assert!((s.value - 11.0 / 21.0).abs() < 1e-12);
        assert!((s.gamma_si - 6.0 / 7.0).abs() < 1e-12);
        assert!((s.gamma_di - 2.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn saturation_ranges() {
        let s0 = saturation(0.0);
        assert!((s0.gamma_si - s0.gamma_di).abs() < 1e-12);
        for i in 1..1000 {
            let s = saturation(i as f64 / 1000.0);
            assert!(s.gamma_di < s.gamma_si);
        }
    }

    #[test]
    fn pattern_costs() {
        // x2y5 at alpha 0.5: 5 y + 1 x for static, 2 for dynamic
        assert_eq!(pattern_cost(Informed::Static, 0.5, 2, 5), 6);
        assert_eq!(pattern_cost(Informed::Dynamic, 0.5, 2, 5), 2);
        assert_eq!(pattern_cost(Informed::Dynamic, 0.3, 3, 5), 4);
        assert_eq!(pattern_cost(Informed::Dynamic, 0.3, 4, 5), 2);
        assert_eq!(pattern_cost(Informed::Dynamic, 0.0, 40, 5), 4);
    }

    #[test]
    fn zero_budget_is_harmless() {
        assert_eq!(si_bound(0.5, 0.0, 50).unwrap().value, 1.0);
        assert_eq!(di_bound(0.5, 0.0, 50).unwrap().value, 1.0);
        assert!(si_bound(0.5, 0.0, 50).unwrap().witness.is_none());
    }

    #[test]
    fn di_saturation_onset() {
        let r = di_bound(0.5, 2.0 / 7.0, 100).unwrap();
        assert!((r.value - 11.0 / 21.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_regimes() {
        for a10 in 1..10 {
            let alpha = a10 as f64 / 10.0;
            let at = si_closed_form(alpha, alpha);
            assert!((at - 1.0 / (1.0 + alpha)).abs() < 1e-12);
            assert!(si_closed_form(alpha, alpha * 0.5) > 1.0 / (1.0 + alpha));
            if alpha < 0.95 {
                assert!(si_closed_form(alpha, (alpha + 1.0) / 2.0) < 1.0 / (1.0 + alpha));
            }
        }
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(comparison(0.5, 0.3), Verdict::DynamicUninformedStronger);
        assert_eq!(comparison(0.5, 0.8), Verdict::InformedStaticStronger);
        assert_eq!(comparison(0.5, 0.5), Verdict::Equal);
    }

    #[test]
    fn worst_target_small_rings() {
        // no pattern fits on ten agents at alpha 0.7 (l* = 9)
        let w = worst_target(Informed::Static, 10, 0.7, 1.0).unwrap();
        assert_eq!(w.profile, ActionProfile::all_x(10));
        assert_eq!(w.efficiency, 1.0);
        // seven agents at alpha 0.5: x2y5 needs six static adversaries
        let w = worst_target(Informed::Static, 7, 0.5, 6.0 / 7.0).unwrap();
        assert_eq!(w.profile.to_string(), "xxyyyyy");
        assert_eq!(w.adversaries, 6);
        let w = worst_target(Informed::Static, 7, 0.5, 5.0 / 7.0).unwrap();
        assert_eq!(w.efficiency, 1.0);
        // dynamic: two y defenders plus the offensive reserve
        let w = worst_target(Informed::Dynamic, 7, 0.5, 3.0 / 7.0).unwrap();
        assert_eq!(w.profile.to_string(), "xxyyyyy");
        assert_eq!(w.adversaries, 3);
    }

    #[test]
    fn witness_reproduces_value() {
        for (alpha, gamma) in [(0.5, 0.7), (0.3, 0.5), (0.7, 0.9), (0.5, 0.2)] {
            for r in [si_bound(alpha, gamma, 60).unwrap(), di_bound(alpha, gamma, 60).unwrap()] {
                let w = r.witness.expect("witness");
                let lens: Vec<f64> = (0..w.lx.len()).map(|j| (w.lx[j] + w.ly[j]) as f64).collect();
                let gains: Vec<f64> = (0..w.lx.len())
                    .map(|j| pattern_gain(alpha, w.lx[j], w.ly[j]))
                    .collect();
                if w.lx.len() == 1 {
                    assert!((gains[0] / lens[0] / (1.0 + alpha) - r.value).abs() < 1e-9);
                } else {
                    // exact budget mix
                    let (s1, s2) = (w.s[0], w.s[1]);
                    let (r1, r2) = (-s2, s1);
                    let e = (r1 * gains[0] + r2 * gains[1]) / ((1.0 + alpha) * (r1 * lens[0] + r2 * lens[1]));
                    assert!((e - r.value).abs() < 1e-9);
                    assert!(s1 > 0.0 && s2 < 0.0);
                }
            }
        }
    }
}
