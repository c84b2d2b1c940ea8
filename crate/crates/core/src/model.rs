//! Core domain types: the POMDP itself, validation of its probabilistic
//! invariants, the revealing check, the minimum positive transition
//! probability, and the fully observable constructions derived from a
//! model (underlying MDP on state-signal pairs, the probe transformation
//! that turns plain reachability into belief-reachability, and the plain
//! MDP view of a fully revealing model).

use num_traits::{One, Zero};
use thiserror::Error;

use crate::belief::Belief;
use crate::mdpcore::FiniteMdp;
use crate::Rational;

/// A single violation found while validating a raw model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Where the problem sits, e.g. `(s1,a)` or `initial`.
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}", self.message, self.location)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model validation failed with {} violation(s):\n{}", .0.len(),
        .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
    #[error("model declares no priorities; a parity analysis needs the `priorities` section")]
    MissingPriorities,
    #[error("model declares no targets; a reachability analysis needs the `targets` section")]
    MissingTargets,
    #[error("model is not revealing: {count} violating transition(s), first: {first}")]
    NotRevealing { count: usize, first: String },
    #[error("operation supports at most 64 states, model has {0}")]
    TooManyStates(usize),
}

/// One sparse kernel entry of a `(state, action)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEntry {
    pub next: usize,
    pub signal: usize,
    pub prob: Rational,
}

/// Priorities for a parity objective: total on states, valued in `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityFn {
    values: Vec<u32>,
    max: u32,
}

impl PriorityFn {
    pub fn new(values: Vec<u32>) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        PriorityFn { values, max }
    }

    pub fn get(&self, state: usize) -> u32 {
        self.values[state]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn max_priority(&self) -> u32 {
        self.max
    }
}

/// The minimum nonzero transition probability of a model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeltaMin(pub Rational);

/// An unvalidated model description, as produced by the parser or built
/// programmatically. [`validate`] turns it into a [`Pomdp`].
#[derive(Debug, Clone, Default)]
pub struct RawModel {
    pub revealing: bool,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub signals: Vec<String>,
    pub transitions: Vec<RawTransition>,
    pub initial: Vec<(String, Rational)>,
    pub priorities: Option<Vec<(String, u32)>>,
    pub targets: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct RawTransition {
    pub from: String,
    pub action: String,
    pub to: String,
    pub signal: String,
    pub prob: Rational,
}

/// A validated POMDP. Immutable after construction; all fields are
/// index-based with the name tables kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Pomdp {
    states: Vec<String>,
    actions: Vec<String>,
    signals: Vec<String>,
    rows: Vec<Vec<KernelEntry>>, // [state * n_actions + action]
    initial: Belief<Rational>,
    priorities: Option<PriorityFn>,
    targets: Option<Vec<usize>>,
    revealing_claimed: bool,
    revealing_ok: bool,
}

/// Outcome of the revealing check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealingReport {
    pub ok: bool,
    pub violations: Vec<RevealingViolation>,
}

/// Why a transition row breaks the revealing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RevealingViolation {
    /// Successor `successor` of `(state, action)` is never announced by
    /// its own name.
    Unannounced {
        state: String,
        action: String,
        successor: String,
    },
    /// The state-named signal `signal_state` is emitted while moving to a
    /// different successor, so observing it would not reveal the state.
    MisleadingSignal {
        state: String,
        action: String,
        signal_state: String,
        successor: String,
    },
}

impl std::fmt::Display for RevealingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RevealingViolation::Unannounced {
                state,
                action,
                successor,
            } => write!(
                f,
                "successor {successor} of ({state},{action}) is never signaled as {successor}"
            ),
            RevealingViolation::MisleadingSignal {
                state,
                action,
                signal_state,
                successor,
            } => write!(
                f,
                "signal {signal_state} is emitted from ({state},{action}) while moving to {successor}"
            ),
        }
    }
}

/// Validate a raw description. Returns the checked model, or every
/// violation found (not just the first), each with its location.
pub fn validate(raw: &RawModel) -> Result<Pomdp, ModelError> {
    let mut violations: Vec<Violation> = Vec::new();
    let mut violate = |location: String, message: String| {
        violations.push(Violation { location, message });
    };

    check_names(&raw.states, "states", &mut violate);
    check_names(&raw.actions, "actions", &mut violate);
    check_names(&raw.signals, "signals", &mut violate);

    let state_idx = |name: &str| raw.states.iter().position(|s| s == name);
    let action_idx = |name: &str| raw.actions.iter().position(|s| s == name);
    let signal_idx = |name: &str| raw.signals.iter().position(|s| s == name);

    let n_states = raw.states.len();
    let n_actions = raw.actions.len();
    let mut rows: Vec<Vec<KernelEntry>> = vec![Vec::new(); n_states * n_actions];
    let mut seen: std::collections::BTreeSet<(usize, usize, usize, usize)> =
        std::collections::BTreeSet::new();

    for t in &raw.transitions {
        let loc = format!("({},{})", t.from, t.action);
        let (Some(s), Some(a)) = (state_idx(&t.from), action_idx(&t.action)) else {
            if state_idx(&t.from).is_none() {
                violate(loc.clone(), format!("undeclared state \"{}\"", t.from));
            }
            if action_idx(&t.action).is_none() {
                violate(loc, format!("undeclared action \"{}\"", t.action));
            }
            continue;
        };
        let Some(next) = state_idx(&t.to) else {
            violate(loc, format!("undeclared state \"{}\"", t.to));
            continue;
        };
        let Some(signal) = signal_idx(&t.signal) else {
            violate(loc, format!("undeclared signal \"{}\"", t.signal));
            continue;
        };
        if t.prob <= Rational::zero() {
            violate(loc.clone(), format!("listed probability {} is not positive", t.prob));
            continue;
        }
        if !seen.insert((s, a, next, signal)) {
            violate(
                loc,
                format!("duplicate transition entry to ({},{})", t.to, t.signal),
            );
            continue;
        }
        rows[s * n_actions + a].push(KernelEntry {
            next,
            signal,
            prob: t.prob.clone(),
        });
    }

    // rows must exist for every (state, action) and sum to exactly 1
    if violations.is_empty() {
        for s in 0..n_states {
            for a in 0..n_actions {
                let row = &mut rows[s * n_actions + a];
                let loc = format!("({},{})", raw.states[s], raw.actions[a]);
                if row.is_empty() {
                    violate(loc, "no transitions declared".to_string());
                    continue;
                }
                let sum: Rational = row.iter().map(|e| e.prob.clone()).sum();
                if !sum.is_one() {
                    violate(loc, format!("row sum {sum} ≠ 1"));
                }
                row.sort_by_key(|e| (e.signal, e.next));
            }
        }
    }

    // initial belief
    let mut initial = vec![Rational::zero(); n_states];
    let mut seen_initial = std::collections::BTreeSet::new();
    for (name, p) in &raw.initial {
        let Some(s) = state_idx(name) else {
            violate("initial".to_string(), format!("undeclared state \"{name}\""));
            continue;
        };
        if !seen_initial.insert(s) {
            violate("initial".to_string(), format!("duplicate state \"{name}\""));
            continue;
        }
        if *p < Rational::zero() {
            violate("initial".to_string(), format!("negative probability for \"{name}\""));
            continue;
        }
        initial[s] = p.clone();
    }
    let initial_sum: Rational = initial.iter().cloned().sum();
    if !initial_sum.is_one() {
        violate(
            "initial".to_string(),
            format!("initial belief sums to {initial_sum}, not a distribution"),
        );
    }

    // priorities: total on S when present
    let priorities = match &raw.priorities {
        None => None,
        Some(list) => {
            let mut values = vec![None::<u32>; n_states];
            for (name, p) in list {
                let Some(s) = state_idx(name) else {
                    violate("priorities".to_string(), format!("undeclared state \"{name}\""));
                    continue;
                };
                if values[s].is_some() {
                    violate("priorities".to_string(), format!("duplicate state \"{name}\""));
                    continue;
                }
                values[s] = Some(*p);
            }
            for s in 0..n_states {
                if values[s].is_none() {
                    violate(
                        "priorities".to_string(),
                        format!("state \"{}\" has no priority", raw.states[s]),
                    );
                }
            }
            if violations.is_empty() {
                Some(PriorityFn::new(
                    values.into_iter().map(|v| v.unwrap()).collect(),
                ))
            } else {
                None
            }
        }
    };

    let targets = match &raw.targets {
        None => None,
        Some(list) => {
            let mut idxs = Vec::new();
            for name in list {
                let Some(s) = state_idx(name) else {
                    violate("targets".to_string(), format!("undeclared state \"{name}\""));
                    continue;
                };
                if idxs.contains(&s) {
                    violate("targets".to_string(), format!("duplicate state \"{name}\""));
                    continue;
                }
                idxs.push(s);
            }
            idxs.sort_unstable();
            Some(idxs)
        }
    };

    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    let mut model = Pomdp {
        states: raw.states.clone(),
        actions: raw.actions.clone(),
        signals: raw.signals.clone(),
        rows,
        initial: Belief::new_unchecked(initial),
        priorities,
        targets,
        revealing_claimed: raw.revealing,
        revealing_ok: false,
    };
    let report = compute_revealing(&model);
    model.revealing_ok = report.ok;

    if raw.revealing {
        // the claim must be owned by the modeler: S ⊆ Z explicitly, and
        // the revealing condition must actually hold
        let mut claim_violations = Vec::new();
        for s in &model.states {
            if !model.signals.contains(s) {
                claim_violations.push(Violation {
                    location: "signals".to_string(),
                    message: format!(
                        "model claims revealing but state \"{s}\" is not in the signal set"
                    ),
                });
            }
        }
        for v in &report.violations {
            claim_violations.push(Violation {
                location: "transitions".to_string(),
                message: format!("model claims revealing but {v}"),
            });
        }
        if !claim_violations.is_empty() {
            return Err(ModelError::Invalid(claim_violations));
        }
    }

    Ok(model)
}

fn check_names<F: FnMut(String, String)>(names: &[String], section: &str, violate: &mut F) {
    if names.is_empty() && (section == "states" || section == "actions") {
        violate(section.to_string(), format!("{section} must not be empty"));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            violate(section.to_string(), format!("duplicate identifier \"{n}\""));
        }
    }
}

impl Pomdp {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn n_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn signal_names(&self) -> &[String] {
        &self.signals
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.actions[a]
    }

    pub fn signal_name(&self, z: usize) -> &str {
        &self.signals[z]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|s| s == name)
    }

    pub fn signal_index(&self, name: &str) -> Option<usize> {
        self.signals.iter().position(|s| s == name)
    }

    pub fn row(&self, state: usize, action: usize) -> &[KernelEntry] {
        &self.rows[state * self.actions.len() + action]
    }

    pub fn initial(&self) -> &Belief<Rational> {
        &self.initial
    }

    /// Replace the initial belief (used to pose queries from other
    /// starting beliefs on an otherwise identical model).
    pub fn with_initial(&self, initial: Belief<Rational>) -> Pomdp {
        let mut m = self.clone();
        assert_eq!(initial.dim(), m.n_states());
        m.initial = initial;
        m
    }

    pub fn revealing_claimed(&self) -> bool {
        self.revealing_claimed
    }

    /// Whether the model actually satisfies the revealing condition.
    pub fn is_revealing(&self) -> bool {
        self.revealing_ok
    }

    pub fn priorities(&self) -> Result<&PriorityFn, ModelError> {
        self.priorities.as_ref().ok_or(ModelError::MissingPriorities)
    }

    pub fn targets(&self) -> Result<&[usize], ModelError> {
        self.targets.as_deref().ok_or(ModelError::MissingTargets)
    }

    pub fn priorities_opt(&self) -> Option<&PriorityFn> {
        self.priorities.as_ref()
    }

    pub fn targets_opt(&self) -> Option<&[usize]> {
        self.targets.as_deref()
    }

    /// Fail unless the model satisfies the revealing condition.
    pub fn require_revealing(&self) -> Result<(), ModelError> {
        if self.revealing_ok {
            return Ok(());
        }
        let report = compute_revealing(self);
        Err(ModelError::NotRevealing {
            count: report.violations.len(),
            first: report
                .violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "state names missing from the signal set".to_string()),
        })
    }

    /// The exact minimum over all positive kernel entries.
    pub fn delta_min(&self) -> DeltaMin {
        let mut min: Option<Rational> = None;
        for row in &self.rows {
            for e in row {
                if min.as_ref().is_none_or(|m| e.prob < *m) {
                    min = Some(e.prob.clone());
                }
            }
        }
        DeltaMin(min.expect("validated model has nonempty rows"))
    }

    /// True when every transition announces its successor surely, i.e.
    /// the signal of every kernel entry names the successor state. Such a
    /// model is equivalent to the finite MDP given by [`Pomdp::to_mdp`].
    pub fn is_fully_revealing(&self) -> bool {
        self.rows.iter().all(|row| {
            row.iter()
                .all(|e| self.signals[e.signal] == self.states[e.next])
        })
    }

    /// Plain MDP view of a fully revealing model (signals dropped).
    pub fn to_mdp(&self) -> Result<FiniteMdp, ModelError> {
        if !self.is_fully_revealing() {
            return Err(ModelError::NotRevealing {
                count: 0,
                first: "model is not fully revealing, signals carry information".to_string(),
            });
        }
        let mut mdp = FiniteMdp::new(self.states.clone(), self.actions.clone());
        for s in 0..self.n_states() {
            for a in 0..self.n_actions() {
                let mut acc: std::collections::BTreeMap<usize, Rational> =
                    std::collections::BTreeMap::new();
                for e in self.row(s, a) {
                    *acc.entry(e.next).or_insert_with(Rational::zero) += &e.prob;
                }
                mdp.set_row(s, a, acc.into_iter().collect())
                    .expect("validated rows sum to one");
            }
        }
        Ok(mdp)
    }
}

/// Check the revealing condition and report every violating transition.
///
/// Both halves of the condition are verified: every positive-probability
/// successor must announce itself by name with positive probability, and
/// a state-named signal must never be emitted while moving to a different
/// state (otherwise observing it would not collapse the belief).
pub fn check_revealing(model: &Pomdp) -> RevealingReport {
    compute_revealing(model)
}

fn compute_revealing(model: &Pomdp) -> RevealingReport {
    let mut violations = Vec::new();
    // signal index of each state's own name, where present
    let own_signal: Vec<Option<usize>> = model
        .states
        .iter()
        .map(|name| model.signals.iter().position(|z| z == name))
        .collect();
    let state_of_signal: Vec<Option<usize>> = model
        .signals
        .iter()
        .map(|name| model.states.iter().position(|s| s == name))
        .collect();

    for s in 0..model.n_states() {
        for a in 0..model.n_actions() {
            let row = model.row(s, a);
            let mut successors: Vec<usize> = row.iter().map(|e| e.next).collect();
            successors.sort_unstable();
            successors.dedup();
            for &next in &successors {
                let announced = own_signal[next].is_some_and(|z| {
                    row.iter().any(|e| e.next == next && e.signal == z)
                });
                if !announced {
                    violations.push(RevealingViolation::Unannounced {
                        state: model.states[s].clone(),
                        action: model.actions[a].clone(),
                        successor: model.states[next].clone(),
                    });
                }
            }
            for e in row {
                if let Some(named) = state_of_signal[e.signal] {
                    if named != e.next {
                        violations.push(RevealingViolation::MisleadingSignal {
                            state: model.states[s].clone(),
                            action: model.actions[a].clone(),
                            signal_state: model.signals[e.signal].clone(),
                            successor: model.states[e.next].clone(),
                        });
                    }
                }
            }
        }
    }
    RevealingReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// The fully observable MDP over state-signal pairs that carries the
/// whole dynamic of the POMDP.
#[derive(Debug, Clone)]
pub struct UnderlyingMdp {
    pub mdp: FiniteMdp,
    /// Initial distribution: mass `b0(s)` on the pair `(s, placeholder)`.
    pub initial: Vec<(usize, Rational)>,
    n_signals: usize,
}

impl UnderlyingMdp {
    /// Node index of the pair `(state, signal)`; `None` is the
    /// placeholder signal of the initial step.
    pub fn node(&self, state: usize, signal: Option<usize>) -> usize {
        state * (self.n_signals + 1) + signal.map_or(0, |z| z + 1)
    }

    /// Inverse of [`UnderlyingMdp::node`].
    pub fn pair(&self, node: usize) -> (usize, Option<usize>) {
        let stride = self.n_signals + 1;
        let s = node / stride;
        let z = node % stride;
        (s, if z == 0 { None } else { Some(z - 1) })
    }
}

/// Build the underlying MDP on `S x (Z + placeholder)`. Transitions from
/// `(s, z)` ignore `z` and mirror the kernel of `(s, a)`; the initial
/// distribution puts `b0(s)` on `(s, placeholder)`.
pub fn build_underlying_mdp(model: &Pomdp) -> UnderlyingMdp {
    let nz = model.n_signals();
    let stride = nz + 1;
    let mut names = Vec::with_capacity(model.n_states() * stride);
    for s in 0..model.n_states() {
        names.push(format!("({},#)", model.state_name(s)));
        for z in 0..nz {
            names.push(format!("({},{})", model.state_name(s), model.signal_name(z)));
        }
    }
    let mut mdp = FiniteMdp::new(names, model.action_names().to_vec());
    for s in 0..model.n_states() {
        for a in 0..model.n_actions() {
            let entries: Vec<(usize, Rational)> = model
                .row(s, a)
                .iter()
                .map(|e| (e.next * stride + e.signal + 1, e.prob.clone()))
                .collect();
            for z_slot in 0..stride {
                mdp.set_row(s * stride + z_slot, a, entries.clone())
                    .expect("kernel rows sum to one");
            }
        }
    }
    let initial = model
        .initial()
        .support()
        .into_iter()
        .map(|s| (s * stride, model.initial().get(s).clone()))
        .collect();
    UnderlyingMdp {
        mdp,
        initial,
        n_signals: nz,
    }
}

/// Result of the probe transformation: plain reachability of the base
/// model's targets becomes belief-reachability of `{top}` here.
#[derive(Debug, Clone)]
pub struct ReachProbe {
    pub model: Pomdp,
    pub top: usize,
    pub bottom: usize,
    pub probe_action: usize,
}

/// Reduce plain reachability to belief-reachability: make the targets
/// absorbing, then add a probe action and two fresh announced absorbing
/// states. The probe moves to `top` exactly from target states, so the
/// belief-reachability value to `top` equals the original reachability
/// value. Requires a revealing model with declared targets.
pub fn reach_probe_transform(base: &Pomdp) -> Result<ReachProbe, ModelError> {
    base.require_revealing()?;
    let targets = base.targets()?.to_vec();
    let is_target = |s: usize| targets.binary_search(&s).is_ok();

    let fresh = |stem: &str, used: &[String]| -> String {
        let mut name = stem.to_string();
        while used.contains(&name) {
            name.insert(0, '_');
        }
        name
    };
    let top_name = fresh("top", &base.states);
    let bot_name = fresh("bot", &base.states);
    let probe_name = fresh("probe", &base.actions);

    let mut states = base.states.clone();
    states.push(top_name.clone());
    states.push(bot_name.clone());
    let top = states.len() - 2;
    let bottom = states.len() - 1;
    let mut actions = base.actions.clone();
    actions.push(probe_name.clone());
    let probe_action = actions.len() - 1;
    let mut signals = base.signals.clone();
    signals.push(top_name.clone());
    signals.push(bot_name.clone());

    let mut transitions = Vec::new();
    let mut push = |from: &str, action: &str, to: &str, signal: &str, prob: Rational| {
        transitions.push(RawTransition {
            from: from.to_string(),
            action: action.to_string(),
            to: to.to_string(),
            signal: signal.to_string(),
            prob,
        });
    };

    for s in 0..base.n_states() {
        let s_name = base.state_name(s);
        for a in 0..base.n_actions() {
            let a_name = base.action_name(a);
            if is_target(s) {
                // targets become absorbing and self-announcing
                push(s_name, a_name, s_name, s_name, Rational::one());
            } else {
                for e in base.row(s, a) {
                    push(
                        s_name,
                        a_name,
                        base.state_name(e.next),
                        base.signal_name(e.signal),
                        e.prob.clone(),
                    );
                }
            }
        }
        let dest = if is_target(s) { &top_name } else { &bot_name };
        push(s_name, &probe_name, dest, dest, Rational::one());
    }
    for (node, name) in [(top, &top_name), (bottom, &bot_name)] {
        let _ = node;
        for a_name in &actions {
            push(name, a_name, name, name, Rational::one());
        }
    }

    let initial = base
        .initial()
        .support()
        .into_iter()
        .map(|s| (base.state_name(s).to_string(), base.initial().get(s).clone()))
        .collect();

    let raw = RawModel {
        revealing: true,
        states,
        actions,
        signals,
        transitions,
        initial,
        priorities: None,
        targets: Some(vec![top_name]),
    };
    let model = validate(&raw).expect("probe transformation preserves validity");
    Ok(ReachProbe {
        model,
        top,
        bottom,
        probe_action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn accepts_wellformed_two_state_model() {
        let model = testkit::fixture_r2();
        assert_eq!(model.n_states(), 2);
        assert!(model.is_revealing());
    }

    #[test]
    fn reports_bad_row_sum_with_location() {
        let mut raw = testkit::raw_two_state();
        raw.transitions[0].prob = rat(4, 10); // row now sums to 0.9
        let err = validate(&raw).unwrap_err();
        let ModelError::Invalid(violations) = err else {
            panic!("expected violations")
        };
        assert!(violations.iter().any(|v| {
            v.location == "(s1,a)" && v.message.contains("row sum") && v.message.contains("9/10")
        }));
    }

    #[test]
    fn reports_undeclared_signal() {
        let mut raw = testkit::raw_two_state();
        raw.transitions[0].signal = "x".to_string();
        let err = validate(&raw).unwrap_err();
        let ModelError::Invalid(violations) = err else {
            panic!("expected violations")
        };
        assert!(violations
            .iter()
            .any(|v| v.message.contains("undeclared signal \"x\"")));
    }

    #[test]
    fn reports_duplicate_identifiers_and_entries() {
        let mut raw = testkit::raw_two_state();
        raw.states.push("s1".to_string());
        let err = validate(&raw).unwrap_err();
        let ModelError::Invalid(violations) = err else {
            panic!("expected violations")
        };
        assert!(violations.iter().any(|v| v.message.contains("duplicate identifier")));

        let mut raw = testkit::raw_two_state();
        let dup = raw.transitions[0].clone();
        raw.transitions.push(dup);
        assert!(validate(&raw).is_err());
    }

    #[test]
    fn rejects_false_revealing_claim() {
        let raw = testkit::raw_figure1_blind(true);
        let err = validate(&raw).unwrap_err();
        let ModelError::Invalid(violations) = err else {
            panic!("expected violations")
        };
        assert!(violations.iter().any(|v| v.message.contains("claims revealing")));
    }

    #[test]
    fn fully_revealing_model_checks_true() {
        let model = testkit::revealing_chain();
        let report = check_revealing(&model);
        assert!(report.ok);
        assert!(model.is_fully_revealing());
    }

    #[test]
    fn blind_model_violates_every_transition() {
        let model = validate(&testkit::raw_figure1_blind(false)).unwrap();
        let report = check_revealing(&model);
        assert!(!report.ok);
        // every (state, action, successor) triple is unannounced
        let mut expected = 0;
        for s in 0..model.n_states() {
            for a in 0..model.n_actions() {
                let mut succ: Vec<usize> = model.row(s, a).iter().map(|e| e.next).collect();
                succ.sort_unstable();
                succ.dedup();
                expected += succ.len();
            }
        }
        assert_eq!(report.violations.len(), expected);
    }

    #[test]
    fn r2_is_revealing_and_delta_min_quarter() {
        let model = testkit::fixture_r2();
        assert!(check_revealing(&model).ok);
        assert_eq!(model.delta_min().0, rat(1, 4));
    }

    #[test]
    fn delta_min_deterministic_model() {
        let model = testkit::deterministic_cycle();
        assert_eq!(model.delta_min().0, rat(1, 1));
    }

    #[test]
    fn misleading_signal_detected() {
        // successor s2 emits signal "s1": revealing must fail even though
        // both successors announce themselves too
        let mut raw = testkit::raw_two_state();
        for t in raw.transitions.iter_mut() {
            if t.from == "s1" && t.to == "s2" && t.signal == "noise" {
                t.signal = "s1".to_string();
            }
        }
        raw.revealing = false;
        let model = validate(&raw).unwrap();
        let report = check_revealing(&model);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, RevealingViolation::MisleadingSignal { .. })));
    }

    #[test]
    fn underlying_mdp_cardinality_and_rows() {
        let model = testkit::fixture_r2();
        let under = build_underlying_mdp(&model);
        // |S| * (|Z| + 1) nominal states
        assert_eq!(under.mdp.n_states(), 2 * 4);
        under.mdp.validate().unwrap();
        // rows from (s, z) are independent of z
        for s in 0..model.n_states() {
            for a in 0..model.n_actions() {
                let base: Vec<_> = under.mdp.row(under.node(s, None), a).unwrap().to_vec();
                for z in 0..model.n_signals() {
                    assert_eq!(under.mdp.row(under.node(s, Some(z)), a).unwrap(), &base[..]);
                }
            }
        }
        // initial mass mirrors b0 on placeholder pairs
        assert_eq!(under.initial.len(), 2);
        for (node, p) in &under.initial {
            let (s, z) = under.pair(*node);
            assert!(z.is_none());
            assert_eq!(p, model.initial().get(s));
        }
    }

    #[test]
    fn underlying_mdp_preserves_reachability() {
        let model = testkit::fixture_r2();
        let under = build_underlying_mdp(&model);
        for s in 0..model.n_states() {
            for a in 0..model.n_actions() {
                let pomdp_succ: std::collections::BTreeSet<usize> =
                    model.row(s, a).iter().map(|e| e.next).collect();
                let mdp_succ: std::collections::BTreeSet<usize> = under
                    .mdp
                    .row(under.node(s, None), a)
                    .unwrap()
                    .iter()
                    .map(|(node, _)| under.pair(*node).0)
                    .collect();
                assert_eq!(pomdp_succ, mdp_succ);
            }
        }
    }

    #[test]
    fn figure1_underlying_nominal_count() {
        let model = validate(&testkit::raw_figure1_blind(false)).unwrap();
        let under = build_underlying_mdp(&model);
        assert_eq!(under.mdp.n_states(), 4 * 2);
    }

    #[test]
    fn probe_transform_shape() {
        let model = testkit::revealing_chain(); // targets = {s2}
        let probe = reach_probe_transform(&model).unwrap();
        assert!(probe.model.is_revealing());
        assert_eq!(probe.model.n_states(), model.n_states() + 2);
        assert_eq!(probe.model.n_actions(), model.n_actions() + 1);
        assert_eq!(probe.model.targets().unwrap(), &[probe.top]);
        // probing from a target state reaches top surely
        let s2 = probe.model.state_index("s2").unwrap();
        let row = probe.model.row(s2, probe.probe_action);
        assert_eq!(row.len(), 1);
        assert_eq!(row[0].next, probe.top);
    }
}
