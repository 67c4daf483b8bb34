//! Grid cores of replica economies and knowledge-restricted rejection.
//!
//! Bundles are handled in integer units of `1/D`. Whether `S` can block `x`
//! is decided exactly: for each member `σ`, `w_σ(a₁)` is the least amount of
//! good 2 that, together with `a₁` of good 1, makes `σ` at least as well off
//! as at `x` (`s_σ` the same for strictly better off); `S` blocks iff the
//! min-plus convolution of these staircases, with one strict factor, stays
//! within the endowment of `S`. Leftover goods go to any member, since the
//! utility is strictly increasing.

use std::collections::HashMap;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::accept::{prove_unacceptable, Criterion};
use crate::coalition::{all_coalitions, Coalition, Player};
use crate::error::{Error, Result};
use crate::logic::{check_proof, Atom, ProofTree};
use crate::rational::Rational;

use super::economy::{effective_coalitions, effective_groups, Allocation, ReplicaEconomy, UtilityOracle};

const INF: i64 = i64::MAX / 4;

/// Bound on `(kD + 1)^(2(2k − 1))`, the raw size of the allocation grid.
pub const MAX_GRID: u128 = 100_000_000;

type Units = [i64; 2];

struct Stairs {
    weak: Vec<i64>,
    strict: Vec<i64>,
}

/// Blocking tests for one economy, with per-bundle staircases cached.
pub struct Blocker {
    econ: ReplicaEconomy,
    cap: i64,
    stairs: HashMap<Units, Arc<Stairs>>,
    memo: HashMap<SmallVec<[(u8, Units); 4]>, bool>,
}

impl Blocker {
    pub fn new(econ: &ReplicaEconomy) -> Self {
        Blocker {
            econ: *econ,
            cap: econ.k as i64 * econ.denominator(),
            stairs: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn economy(&self) -> &ReplicaEconomy {
        &self.econ
    }

    fn stairs(&mut self, x: Units) -> Arc<Stairs> {
        if let Some(s) = self.stairs.get(&x) {
            return s.clone();
        }
        let u = self.econ.utility();
        let cap = self.cap;
        let build = |accept: &dyn Fn(Units) -> bool| {
            let mut out = vec![INF; cap as usize + 1];
            let mut a2 = cap;
            for a1 in 0..=cap {
                if !accept([a1, cap]) {
                    continue;
                }
                while a2 > 0 && accept([a1, a2 - 1]) {
                    a2 -= 1;
                }
                out[a1 as usize] = a2;
            }
            out
        };
        let weak = build(&|b| u.compare_units(b, x).is_ge());
        let strict = build(&|b| u.compare_units(b, x).is_gt());
        let s = Arc::new(Stairs { weak, strict });
        self.stairs.insert(x, s.clone());
        s
    }

    fn totals(&self, s: Coalition) -> Units {
        let [a, b] = self.econ.type_counts(s);
        let d = self.econ.denominator();
        [a as i64 * d, b as i64 * d]
    }

    /// Some grid `y` on `S` redistributing the endowment of `S` that leaves
    /// nobody in `S` worse off than at `x` and improves `strict` (or, if
    /// `None`, somebody). Bundles for the members of `S` in order.
    pub fn block(&mut self, x: &[Units], s: Coalition, strict: Option<Player>) -> Option<Vec<Units>> {
        let [t1, t2] = self.totals(s);
        let width = t1 as usize + 1;
        let members: Vec<Player> = s.members().collect();
        let stairs: Vec<Arc<Stairs>> = members.iter().map(|&p| self.stairs(x[p - 1])).collect();
        // layer[j] = (weak-only, with-one-strict) after the first j + 1 members
        let pick = |k: usize| -> (Vec<i64>, Vec<i64>) {
            let w = stairs[k].weak[..width].to_vec();
            let st = stairs[k].strict[..width].to_vec();
            match strict {
                Some(p) if members[k] == p => (vec![INF; width], st),
                Some(_) => (w, vec![INF; width]),
                None => (w, st),
            }
        };
        let mut layers: Vec<(Vec<i64>, Vec<i64>)> = vec![pick(0)];
        for k in 1..members.len() {
            let (fw, fs) = pick(k);
            let (hw, hs) = layers.last().expect("nonempty");
            let nw = convolve(hw, &fw);
            let ns: Vec<i64> = convolve(hs, &fw).into_iter().zip(convolve(hw, &fs)).map(|(a, b)| a.min(b)).collect();
            layers.push((nw, ns));
        }
        let (_, last) = layers.last().expect("nonempty");
        if last[t1 as usize] > t2 {
            return None;
        }
        // walk back: member k takes (a1, f(a1)); `need_strict` tracks which
        // table the remaining prefix must come from
        let mut out = vec![[0i64; 2]; members.len()];
        let mut a = t1 as usize;
        let mut need_strict = true;
        for k in (0..members.len()).rev() {
            let (fw, fs) = pick(k);
            let target = if need_strict { layers[k].1[a] } else { layers[k].0[a] };
            if k == 0 {
                out[0] = [a as i64, target];
                break;
            }
            let (pw, ps) = &layers[k - 1];
            let mut found = false;
            for b in 0..=a {
                let options: [(&[i64], &[i64], bool); 2] = if need_strict {
                    [(ps, &fw, true), (pw, &fs, false)]
                } else {
                    [(pw, &fw, false), (pw, &fw, false)]
                };
                for (prefix, own, still_strict) in options {
                    if prefix[a - b] < INF && own[b] < INF && prefix[a - b] + own[b] == target {
                        out[k] = [b as i64, own[b]];
                        a -= b;
                        need_strict = still_strict;
                        found = true;
                        break;
                    }
                }
                if found {
                    break;
                }
            }
            debug_assert!(found, "the convolution tables are consistent");
        }
        // leftover good 2 goes to the last member
        let used: i64 = out.iter().map(|b| b[1]).sum();
        out.last_mut().expect("nonempty")[1] += t2 - used;
        Some(out)
    }

    /// `S` blocks `x` (someone strictly better off), memoized on the
    /// members' types and bundles.
    pub fn blocks(&mut self, x: &[Units], s: Coalition) -> bool {
        let mut key: SmallVec<[(u8, Units); 4]> = s
            .members()
            .map(|p| ((self.econ.participant(p).kind) as u8, x[p - 1]))
            .collect();
        key.sort_unstable();
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let b = self.block(x, s, None).is_some();
        self.memo.insert(key, b);
        b
    }
}

/// `(f ⊕ g)(a) = min_{b ≤ a} f(a − b) + g(b)`
fn convolve(f: &[i64], g: &[i64]) -> Vec<i64> {
    let mut out = vec![INF; f.len()];
    for (b, &gb) in g.iter().enumerate() {
        if gb >= INF {
            continue;
        }
        for (a, &fa) in f.iter().enumerate().take(f.len() - b) {
            if fa < INF && fa + gb < out[a + b] {
                out[a + b] = fa + gb;
            }
        }
    }
    out
}

fn to_units(econ: &ReplicaEconomy, x: &Allocation) -> Result<Vec<Units>> {
    if x.bundles().len() != econ.participants() {
        return Err(Error::invalid(format!(
            "allocation has {} bundles, the economy has {} participants",
            x.bundles().len(),
            econ.participants()
        )));
    }
    let d = econ.denominator();
    if !x.on_grid(d) {
        return Err(Error::invalid(format!("allocation {x:?} is not on the 1/{d} grid")));
    }
    Ok(x.bundles().iter().map(|b| [(b[0] * d).to_integer(), (b[1] * d).to_integer()]).collect())
}

fn from_units(econ: &ReplicaEconomy, x: &[Units]) -> Allocation {
    let d = econ.denominator();
    Allocation(x.iter().map(|b| [Rational::new(b[0], d), Rational::new(b[1], d)]).collect())
}

fn check_feasible(econ: &ReplicaEconomy, x: &[Units]) -> Result<()> {
    let total = econ.k as i64 * econ.denominator();
    let sum = x.iter().fold([0, 0], |s, b| [s[0] + b[0], s[1] + b[1]]);
    if sum != [total, total] {
        return Err(Error::invalid("allocation does not distribute the total endowment exactly"));
    }
    Ok(())
}

fn guard(econ: &ReplicaEconomy) -> Result<()> {
    let side = (econ.k as u128) * (econ.denominator() as u128) + 1;
    let exp = 2 * (2 * econ.k as u32 - 1);
    match side.checked_pow(exp) {
        Some(n) if n <= MAX_GRID => Ok(()),
        _ => Err(Error::unsupported(format!(
            "grid core for k = {} at D = {} exceeds the enumeration guard",
            econ.k,
            econ.denominator()
        ))),
    }
}

/// Feasible grid allocations not blocked via any effective coalition by a
/// grid allocation. Lexicographic order.
///
/// This is the core restricted to the grid, enlarged by allocations whose
/// only blockers lie off the grid.
pub fn grid_core(econ: &ReplicaEconomy) -> Result<Vec<Allocation>> {
    grid_core_with(econ, &effective_coalitions(econ.k))
}

/// [`grid_core`] consulting every coalition; `k ≤ 2`, `D ≤ 4`.
pub fn grid_core_exhaustive(econ: &ReplicaEconomy) -> Result<Vec<Allocation>> {
    if econ.k > 2 || econ.denominator() > 4 {
        return Err(Error::unsupported("the exhaustive-coalition grid core supports k <= 2 and D <= 4"));
    }
    grid_core_with(econ, &all_coalitions(econ.participants()))
}

/// Grid allocations not blocked via any of `coalitions`.
pub fn grid_core_with(econ: &ReplicaEconomy, coalitions: &[Coalition]) -> Result<Vec<Allocation>> {
    guard(econ)?;
    let n = econ.participants();
    if let Some(s) = coalitions.iter().find(|s| !s.within(n)) {
        return Err(Error::invalid(format!("coalition {{{s}}} is not a set of participants")));
    }
    // coalitions are tested once their last member has a bundle
    let mut at_level: Vec<Vec<Coalition>> = vec![Vec::new(); n + 1];
    for &s in coalitions {
        let last = s.members().last().expect("nonempty");
        at_level[last].push(s);
    }
    let total = econ.k as i64 * econ.denominator();
    let mut blocker = Blocker::new(econ);
    let mut x = vec![[0i64; 2]; n];
    fn go(
        p: usize,
        rest: Units,
        x: &mut Vec<Units>,
        at_level: &[Vec<Coalition>],
        blocker: &mut Blocker,
        out: &mut Vec<Vec<Units>>,
    ) {
        let n = x.len();
        let place = |b: Units, x: &mut Vec<Units>, blocker: &mut Blocker| -> bool {
            x[p - 1] = b;
            !at_level[p].iter().any(|&s| blocker.blocks(x, s))
        };
        if p == n {
            if place(rest, x, blocker) {
                out.push(x.clone());
            }
            return;
        }
        for a1 in 0..=rest[0] {
            for a2 in 0..=rest[1] {
                if place([a1, a2], x, blocker) {
                    go(p + 1, [rest[0] - a1, rest[1] - a2], x, at_level, blocker, out);
                }
            }
        }
    }
    let mut found = Vec::new();
    go(1, [total, total], &mut x, &at_level, &mut blocker, &mut found);
    found.sort();
    Ok(found.iter().map(|u| from_units(econ, u)).collect())
}

/// A grid `y` and coalition `S ∋ σ`, `S ∈ family`, with `y` redistributing
/// the endowment of `S`, nobody in `S` worse off and `σ` strictly better
/// off: the reason `σ` rejects `x` knowing the coalitions of `family`. `y`
/// is 0 off `S`.
pub fn rejection(econ: &ReplicaEconomy, sigma: Player, family: &[Coalition], x: &Allocation) -> Result<Option<(Coalition, Allocation)>> {
    let units = to_units(econ, x)?;
    check_feasible(econ, &units)?;
    let mut family = family.to_vec();
    family.sort();
    let mut blocker = Blocker::new(econ);
    for s in family.into_iter().filter(|s| s.contains(sigma)) {
        if let Some(y) = blocker.block(&units, s, Some(sigma)) {
            let mut full = vec![[0i64; 2]; econ.participants()];
            for (p, b) in s.members().zip(y) {
                full[p - 1] = b;
            }
            return Ok(Some((s, from_units(econ, &full))));
        }
    }
    Ok(None)
}

/// Nobody rejects `x` when participant `σ` knows `families[σ − 1]`.
pub fn unanimously_accepted(econ: &ReplicaEconomy, families: &[Vec<Coalition>], x: &Allocation) -> Result<bool> {
    if families.len() != econ.participants() {
        return Err(Error::invalid("one family per participant is required"));
    }
    for (k, fam) in families.iter().enumerate() {
        if rejection(econ, k + 1, fam, x)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Each effective coalition known to all of its members, optionally leaving
/// out the near-balanced group (3).
pub fn effective_profile(k: usize, without_group3: bool) -> Vec<Vec<Coalition>> {
    let groups = effective_groups(k);
    let mut fams = vec![Vec::new(); 2 * k];
    for (g, list) in groups.iter().enumerate() {
        if without_group3 && g == 2 {
            continue;
        }
        for &s in list {
            for p in s.members() {
                fams[p - 1].push(s);
            }
        }
    }
    for f in &mut fams {
        f.sort();
        f.dedup();
    }
    fams
}

/// A participant, the finite knowledge `Γ_σ = {y^S}` and a checked proof of
/// `B_σ[Γ_σ → ¬C_σ(x)]` over the candidate atoms of `Γ_σ`.
#[derive(Debug, Clone)]
pub struct PartialKnowledge {
    pub participant: Player,
    pub coalition: Coalition,
    pub witness: Allocation,
    pub gamma: Vec<Atom>,
    pub proof: ProofTree,
}

/// For `x` outside the grid core: someone who rejects `x` knowing one atom.
pub fn partial_knowledge_witness(econ: &ReplicaEconomy, x: &Allocation) -> Result<Option<PartialKnowledge>> {
    let units = to_units(econ, x)?;
    check_feasible(econ, &units)?;
    let mut blocker = Blocker::new(econ);
    for s in effective_coalitions(econ.k) {
        let Some(y) = blocker.block(&units, s, None) else { continue };
        let mut full = vec![[0i64; 2]; econ.participants()];
        for (p, b) in s.members().zip(y) {
            full[p - 1] = b;
        }
        let witness = from_units(econ, &full);
        let u = econ.utility();
        let sigma = s
            .members()
            .find(|&p| u.compare_units(full[p - 1], units[p - 1]).is_gt())
            .expect("a blocking allocation improves someone");
        let point = witness.to_point();
        let atom = Atom::ach(point.clone(), s);
        let gamma_set = Arc::new(std::iter::once(crate::logic::Formula::atom(atom.clone())).collect());
        let criterion = Criterion::new(sigma, x.to_point(), econ.everyone(), vec![(s, point.clone())])?;
        let oracle = UtilityOracle(u);
        let proof = prove_unacceptable(&criterion, &gamma_set, s, &point, &oracle)?;
        if !check_proof(&proof, &oracle) {
            return Err(Error::invalid("the rejection proof does not check"));
        }
        return Ok(Some(PartialKnowledge {
            participant: sigma,
            coalition: s,
            witness,
            gamma: vec![atom],
            proof,
        }));
    }
    Ok(None)
}

/// Per-type bundles of an equal-treatment allocation: `(x_(1,·), x_(2,·))`
/// as an allocation of the one-fold economy.
pub fn per_type(econ: &ReplicaEconomy, x: &Allocation) -> Option<Allocation> {
    if !x.equal_treatment(econ.k) {
        return None;
    }
    Some(Allocation(vec![x.bundles()[0], x.bundles()[econ.k]]))
}
