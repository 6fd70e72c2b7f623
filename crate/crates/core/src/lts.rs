//! States, transitions and the flattening primitives the quality metrics are
//! computed over.
//!
//! A [`State`] is a cheap, shareable handle: cloning it bumps a reference
//! count, and its hash is computed once at construction. This keeps
//! transition sets with millions of entries (a machine with an unbounded
//! "set any time" operation easily produces that many) within a few tens of
//! megabytes.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet, FxHasher};
use serde_json::{Map, Value as Json};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtsError {
    #[error("variable `{0}` is missing")]
    MissingVariable(String),
    #[error("unexpected variable `{0}`")]
    ExtraVariable(String),
    #[error("state has {found} values but {expected} variables are declared")]
    Arity { expected: usize, found: usize },
    #[error("pre-state binds ({pre}) but post-state binds ({post})")]
    VariableMismatch { pre: String, post: String },
    #[error("list lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot compare a set of transitions with a set of state pairs")]
    KindMismatch,
    #[error("malformed transition JSON: {0}")]
    Json(String),
    #[error("unknown enumerated element `{0}`")]
    UnknownElement(String),
}

/// An element of a deferred or enumerated set, e.g. `ON` of `MODE`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnumElement {
    pub set: Arc<str>,
    pub name: Arc<str>,
}

/// A machine value. Ordering is by kind first (integers, booleans,
/// enumerated elements), then payload.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Enum(EnumElement),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Bool(_) => "boolean",
            Value::Enum(_) => "enumerated element",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
            Value::Enum(e) => Json::String(e.name.to_string()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(true) => f.write_str("TRUE"),
            Value::Bool(false) => f.write_str("FALSE"),
            Value::Enum(e) => f.write_str(&e.name),
        }
    }
}

/// Declaration order of a machine's variables.
#[derive(Clone)]
pub struct VarOrder(Arc<[String]>);

impl VarOrder {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VarOrder(names.into_iter().map(Into::into).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Error describing how `other` differs from `self`.
    fn mismatch(&self, other: &VarOrder) -> LtsError {
        if let Some(missing) = self.0.iter().find(|n| other.index_of(n).is_none()) {
            return LtsError::MissingVariable(missing.clone());
        }
        if let Some(extra) = other.0.iter().find(|n| self.index_of(n).is_none()) {
            return LtsError::ExtraVariable(extra.clone());
        }
        LtsError::VariableMismatch {
            pre: self.0.join(", "),
            post: other.0.join(", "),
        }
    }
}

impl PartialEq for VarOrder {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarOrder {}

impl fmt::Debug for VarOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

struct StateData {
    vars: VarOrder,
    values: Box<[Value]>,
    hash: u64,
}

/// A total assignment of the machine variables, in declaration order.
#[derive(Clone)]
pub struct State(Arc<StateData>);

impl State {
    pub fn new(vars: VarOrder, values: Vec<Value>) -> Result<Self, LtsError> {
        if vars.len() != values.len() {
            return Err(LtsError::Arity {
                expected: vars.len(),
                found: values.len(),
            });
        }
        let mut h = FxHasher::default();
        values.hash(&mut h);
        Ok(State(Arc::new(StateData {
            vars,
            values: values.into_boxed_slice(),
            hash: h.finish(),
        })))
    }

    /// Integer-only convenience constructor.
    pub fn ints(vars: &VarOrder, values: &[i64]) -> Result<Self, LtsError> {
        State::new(vars.clone(), values.iter().map(|&v| Value::Int(v)).collect())
    }

    pub fn vars(&self) -> &VarOrder {
        &self.0.vars
    }

    pub fn values(&self) -> &[Value] {
        &self.0.values
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars().index_of(name).map(|i| &self.0.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.vars()
            .names()
            .iter()
            .map(String::as_str)
            .zip(self.values().iter())
    }

    /// Rebind this state under `order`, which must name the same variables.
    pub fn reorder(&self, order: &VarOrder) -> Result<State, LtsError> {
        if self.vars() == order {
            return Ok(self.clone());
        }
        let mut values = Vec::with_capacity(order.len());
        for name in order.names() {
            match self.get(name) {
                Some(v) => values.push(v.clone()),
                None => return Err(LtsError::MissingVariable(name.clone())),
            }
        }
        if order.len() != self.vars().len() {
            return Err(order.mismatch(self.vars()));
        }
        State::new(order.clone(), values)
    }

    fn check_order(&self, order: &VarOrder) -> Result<(), LtsError> {
        if self.vars() == order {
            Ok(())
        } else {
            Err(order.mismatch(self.vars()))
        }
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (name, value) in self.iter() {
            map.insert(name.to_string(), value.to_json());
        }
        Json::Object(map)
    }
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.values == other.0.values
                && self.0.vars == other.0.vars)
    }
}

impl Eq for State {}

impl Hash for State {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values()
            .cmp(other.values())
            .then_with(|| self.vars().names().cmp(other.vars().names()))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Operation name carried by a transition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `[pre, label, post]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub pre: State,
    pub label: Label,
    pub post: State,
}

impl Transition {
    pub fn new(pre: State, label: impl Into<Label>, post: State) -> Result<Self, LtsError> {
        if pre.vars() != post.vars() {
            return Err(pre.vars().mismatch(post.vars()));
        }
        Ok(Transition {
            pre,
            label: label.into(),
            post,
        })
    }

    pub fn pair(&self) -> StatePair {
        StatePair {
            pre: self.pre.clone(),
            post: self.post.clone(),
        }
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        map.insert("pre".into(), self.pre.to_json());
        map.insert("op".into(), Json::String(self.label.to_string()));
        map.insert("post".into(), self.post.to_json());
        Json::Object(map)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.pre, self.label, self.post)
    }
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(pre, post)` with the operation erased.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatePair {
    pub pre: State,
    pub post: State,
}

impl StatePair {
    pub fn new(pre: State, post: State) -> Result<Self, LtsError> {
        if pre.vars() != post.vars() {
            return Err(pre.vars().mismatch(post.vars()));
        }
        Ok(StatePair { pre, post })
    }
}

impl fmt::Debug for StatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.pre, self.post)
    }
}

/// One position of a flattened transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Value(Value),
    Label(Label),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Value(v) => write!(f, "{v}"),
            Token::Label(l) => write!(f, "{l}"),
        }
    }
}

/// `[v1..vN, label, v'1..v'N]` for transitions, `[v1..vN, v'1..v'N]` for pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatList(pub Vec<Token>);

impl FlatList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FlatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

pub fn flatten_transition(t: &Transition, order: &VarOrder) -> Result<FlatList, LtsError> {
    t.pre.check_order(order)?;
    t.post.check_order(order)?;
    let mut items = Vec::with_capacity(2 * order.len() + 1);
    items.extend(t.pre.values().iter().cloned().map(Token::Value));
    items.push(Token::Label(t.label.clone()));
    items.extend(t.post.values().iter().cloned().map(Token::Value));
    Ok(FlatList(items))
}

pub fn flatten_pair(p: &StatePair, order: &VarOrder) -> Result<FlatList, LtsError> {
    p.pre.check_order(order)?;
    p.post.check_order(order)?;
    let mut items = Vec::with_capacity(2 * order.len());
    items.extend(p.pre.values().iter().cloned().map(Token::Value));
    items.extend(p.post.values().iter().cloned().map(Token::Value));
    Ok(FlatList(items))
}

/// Anything that flattens into a token list under a variable order.
pub trait Flatten: Clone + Eq + std::hash::Hash + Ord {
    fn flatten(&self, order: &VarOrder) -> Result<FlatList, LtsError>;

    /// Length of the flattened list, without building it.
    fn flat_len(&self, order: &VarOrder) -> Result<usize, LtsError> {
        Ok(self.flatten(order)?.len())
    }
}

impl Flatten for Transition {
    fn flatten(&self, order: &VarOrder) -> Result<FlatList, LtsError> {
        flatten_transition(self, order)
    }

    fn flat_len(&self, order: &VarOrder) -> Result<usize, LtsError> {
        self.pre.check_order(order)?;
        self.post.check_order(order)?;
        Ok(2 * order.len() + 1)
    }
}

impl Flatten for StatePair {
    fn flatten(&self, order: &VarOrder) -> Result<FlatList, LtsError> {
        flatten_pair(self, order)
    }

    fn flat_len(&self, order: &VarOrder) -> Result<usize, LtsError> {
        self.pre.check_order(order)?;
        self.post.check_order(order)?;
        Ok(2 * order.len())
    }
}

/// Duplicate-free set with deterministic hashing.
#[derive(Clone)]
pub struct Set<T>(FxHashSet<T>);

pub type TransitionSet = Set<Transition>;
pub type PairSet = Set<StatePair>;
pub type StateSet = Set<State>;

impl<T: Eq + Hash> Default for Set<T> {
    fn default() -> Self {
        Set(FxHashSet::default())
    }
}

impl<T: Eq + Hash> Set<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Set(FxHashSet::with_capacity_and_hasher(n, Default::default()))
    }

    /// Returns false if the element was already present.
    pub fn insert(&mut self, item: T) -> bool {
        self.0.insert(item)
    }

    pub fn remove(&mut self, item: &T) -> bool {
        self.0.remove(item)
    }

    pub fn contains(&self, item: &T) -> bool {
        self.0.contains(item)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }

    pub fn retain(&mut self, f: impl FnMut(&T) -> bool) {
        self.0.retain(f)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|x| big.contains(x)).count()
    }

    /// `|self ∪ other|` without materialising the union.
    pub fn union_len(&self, other: &Self) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection_len(other) == 0
    }
}

impl<T: Eq + Hash + Clone> Set<T> {
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.extend(other.iter().cloned());
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|x| big.contains(x)).cloned().collect()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.iter().filter(|x| !other.contains(x)).cloned().collect()
    }
}

impl<T: Ord + Clone> Set<T> {
    /// Elements in canonical order.
    pub fn sorted(&self) -> Vec<T> {
        let mut v: Vec<T> = self.0.iter().cloned().collect();
        v.sort_unstable();
        v
    }
}

impl<T: Eq + Hash> PartialEq for Set<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<T: Eq + Hash> Eq for Set<T> {}

impl<T: Eq + Hash> FromIterator<T> for Set<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Set(iter.into_iter().collect())
    }
}

impl<T: Eq + Hash> Extend<T> for Set<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<T> IntoIterator for Set<T> {
    type Item = T;
    type IntoIter = std::collections::hash_set::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a, T> IntoIterator for &'a Set<T> {
    type Item = &'a T;
    type IntoIter = std::collections::hash_set::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<T: fmt::Debug + Ord + Clone> fmt::Debug for Set<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sorted()).finish()
    }
}

impl TransitionSet {
    /// Transitions whose label is not `label`.
    pub fn without_label(&self, label: &str) -> TransitionSet {
        self.iter()
            .filter(|t| t.label.as_str() != label)
            .cloned()
            .collect()
    }

    pub fn with_label(&self, label: &str) -> TransitionSet {
        self.iter()
            .filter(|t| t.label.as_str() == label)
            .cloned()
            .collect()
    }

    /// Number of transitions per label.
    pub fn label_counts(&self) -> FxHashMap<Label, usize> {
        let mut counts = FxHashMap::default();
        for t in self.iter() {
            *counts.entry(t.label.clone()).or_insert(0) += 1;
        }
        counts
    }
}

/// Sum of flattened lengths.
pub fn set_size<T: Flatten>(set: &Set<T>, order: &VarOrder) -> Result<u64, LtsError> {
    let mut total = 0u64;
    for item in set.iter() {
        total += item.flatten(order)?.len() as u64;
    }
    Ok(total)
}

pub fn pairs_of(set: &TransitionSet) -> PairSet {
    set.iter().map(Transition::pair).collect()
}

pub fn labels_of(set: &TransitionSet) -> std::collections::BTreeSet<Label> {
    set.iter().map(|t| t.label.clone()).collect()
}

/// Maps enumerated element names to their set, for decoding JSON strings.
#[derive(Debug, Clone, Default)]
pub struct EnumTable(FxHashMap<String, EnumElement>);

impl EnumTable {
    pub fn insert(&mut self, set: &str, element: &str) {
        self.0.insert(
            element.to_string(),
            EnumElement {
                set: Arc::from(set),
                name: Arc::from(element),
            },
        );
    }

    pub fn get(&self, element: &str) -> Option<&EnumElement> {
        self.0.get(element)
    }
}

fn value_from_json(json: &Json, enums: &EnumTable) -> Result<Value, LtsError> {
    match json {
        Json::Bool(b) => Ok(Value::Bool(*b)),
        Json::Number(n) => n
            .as_i64()
            .map(Value::Int)
            .ok_or_else(|| LtsError::Json(format!("non-integer number {n}"))),
        Json::String(s) => enums
            .get(s)
            .cloned()
            .map(Value::Enum)
            .ok_or_else(|| LtsError::UnknownElement(s.clone())),
        other => Err(LtsError::Json(format!("unsupported value {other}"))),
    }
}

pub fn state_from_json(json: &Json, order: &VarOrder, enums: &EnumTable) -> Result<State, LtsError> {
    let obj = json
        .as_object()
        .ok_or_else(|| LtsError::Json("state must be an object".into()))?;
    if let Some(extra) = obj.keys().find(|k| order.index_of(k).is_none()) {
        return Err(LtsError::ExtraVariable(extra.clone()));
    }
    let mut values = Vec::with_capacity(order.len());
    for name in order.names() {
        let v = obj
            .get(name)
            .ok_or_else(|| LtsError::MissingVariable(name.clone()))?;
        values.push(value_from_json(v, enums)?);
    }
    State::new(order.clone(), values)
}

/// Decode `{"pre": {...}, "op": "name", "post": {...}}`.
pub fn transition_from_json(
    json: &Json,
    order: &VarOrder,
    enums: &EnumTable,
) -> Result<Transition, LtsError> {
    let obj = json
        .as_object()
        .ok_or_else(|| LtsError::Json("transition must be an object".into()))?;
    let field = |k: &str| {
        obj.get(k)
            .ok_or_else(|| LtsError::Json(format!("missing field `{k}`")))
    };
    let pre = state_from_json(field("pre")?, order, enums)?;
    let op = field("op")?
        .as_str()
        .ok_or_else(|| LtsError::Json("`op` must be a string".into()))?;
    let post = state_from_json(field("post")?, order, enums)?;
    Transition::new(pre, op, post)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock() -> VarOrder {
        VarOrder::new(["hour", "minute"])
    }

    fn tr(order: &VarOrder, pre: &[i64], op: &str, post: &[i64]) -> Transition {
        Transition::new(
            State::ints(order, pre).unwrap(),
            op,
            State::ints(order, post).unwrap(),
        )
        .unwrap()
    }

    fn ints(list: &FlatList) -> Vec<String> {
        list.0.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn flatten_clock_transition() {
        let o = clock();
        let flat = flatten_transition(&tr(&o, &[1, 59], "inc_hour", &[2, 1]), &o).unwrap();
        assert_eq!(ints(&flat), ["1", "59", "inc_hour", "2", "1"]);
        let flat = flatten_transition(&tr(&o, &[0, 0], "next_day", &[0, 0]), &o).unwrap();
        assert_eq!(ints(&flat), ["0", "0", "next_day", "0", "0"]);
    }

    #[test]
    fn flatten_single_variable() {
        let o = VarOrder::new(["x"]);
        let flat = flatten_transition(&tr(&o, &[5], "op", &[6]), &o).unwrap();
        assert_eq!(ints(&flat), ["5", "op", "6"]);
        let pair = tr(&o, &[7], "op", &[8]).pair();
        assert_eq!(ints(&flatten_pair(&pair, &o).unwrap()), ["7", "8"]);
    }

    #[test]
    fn flatten_pairs() {
        let o = clock();
        let p = tr(&o, &[2, 59], "inc_hour", &[3, 1]).pair();
        assert_eq!(ints(&flatten_pair(&p, &o).unwrap()), ["2", "59", "3", "1"]);
        let p = tr(&o, &[0, 0], "x", &[0, 0]).pair();
        assert_eq!(flatten_pair(&p, &o).unwrap().len(), 4);
    }

    #[test]
    fn flatten_rejects_other_variables() {
        let o = clock();
        let other = VarOrder::new(["hour", "second"]);
        let t = tr(&other, &[0, 0], "tick", &[0, 1]);
        assert_eq!(
            flatten_transition(&t, &o),
            Err(LtsError::MissingVariable("minute".into()))
        );
        let wider = VarOrder::new(["hour", "minute", "second"]);
        let t = tr(&wider, &[0, 0, 0], "tick", &[0, 0, 1]);
        assert_eq!(
            flatten_transition(&t, &o),
            Err(LtsError::ExtraVariable("second".into()))
        );
    }

    #[test]
    fn transition_requires_matching_variables() {
        let pre = State::ints(&clock(), &[0, 0]).unwrap();
        let post = State::ints(&VarOrder::new(["x", "y"]), &[0, 0]).unwrap();
        assert!(Transition::new(pre, "op", post).is_err());
    }

    #[test]
    fn set_semantics() {
        let o = clock();
        let mut set = TransitionSet::new();
        assert!(set.insert(tr(&o, &[0, 0], "a", &[0, 1])));
        assert!(!set.insert(tr(&o, &[0, 0], "a", &[0, 1])));
        assert_eq!(set.len(), 1);
        assert_eq!(set_size(&set, &o).unwrap(), 5);
        assert_eq!(set_size(&TransitionSet::new(), &o).unwrap(), 0);
    }

    #[test]
    fn pairs_erase_labels() {
        let o = clock();
        let set: TransitionSet = [
            tr(&o, &[0, 0], "inc_minute", &[0, 1]),
            tr(&o, &[0, 0], "set_time", &[0, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(pairs_of(&set).len(), 1);
        assert!(pairs_of(&TransitionSet::new()).is_empty());
        assert_eq!(labels_of(&set).len(), 2);
        assert!(labels_of(&TransitionSet::new()).is_empty());
    }

    #[test]
    fn value_ordering_is_by_kind_first() {
        let e = Value::Enum(EnumElement {
            set: "S".into(),
            name: "a".into(),
        });
        assert!(Value::Int(100) < Value::Bool(false));
        assert!(Value::Bool(true) < e);
        assert_ne!(Value::Int(1), Value::Bool(true));
    }

    #[test]
    fn json_round_trip() {
        let o = clock();
        let t = tr(&o, &[3, 0], "inc_minute", &[12, 0]);
        let json = t.to_json();
        assert_eq!(
            json.to_string(),
            r#"{"pre":{"hour":3,"minute":0},"op":"inc_minute","post":{"hour":12,"minute":0}}"#
        );
        let back = transition_from_json(&json, &o, &EnumTable::default()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_unknown_variable() {
        let o = clock();
        let json: Json = serde_json::from_str(
            r#"{"pre":{"hour":0,"minute":0,"sec":1},"op":"a","post":{"hour":0,"minute":1}}"#,
        )
        .unwrap();
        assert_eq!(
            transition_from_json(&json, &o, &EnumTable::default()),
            Err(LtsError::ExtraVariable("sec".into()))
        );
    }

    #[test]
    fn reorder_states() {
        let o = clock();
        let rev = VarOrder::new(["minute", "hour"]);
        let s = State::ints(&rev, &[30, 5]).unwrap();
        assert_eq!(s.reorder(&o).unwrap(), State::ints(&o, &[5, 30]).unwrap());
    }
}
