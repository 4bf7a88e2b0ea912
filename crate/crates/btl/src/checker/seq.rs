//! Eventually periodic Boolean sequences.
//!
//! Truth values of a path formula along an ultimately periodic word form an
//! ultimately periodic sequence again; this module computes them exactly,
//! operator by operator. The leaf-loop path evaluator and the lasso-word
//! evaluator are both built on top of it.

/// `at(i)` is `prefix[i]` for `i < prefix.len()`, then cycles through
/// `cycle` forever. `cycle` is never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvSeq {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EvSeq {
    pub fn new(prefix: Vec<bool>, cycle: Vec<bool>) -> EvSeq {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        EvSeq { prefix, cycle }
    }

    pub fn constant(v: bool) -> EvSeq {
        EvSeq { prefix: Vec::new(), cycle: vec![v] }
    }

    pub fn at(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Common shape `(prefix length, cycle length)` for pointwise work on
    /// two sequences.
    fn joint_shape(&self, other: &EvSeq) -> (usize, usize) {
        (
            self.prefix.len().max(other.prefix.len()),
            lcm(self.cycle.len(), other.cycle.len()),
        )
    }

    fn from_fn(plen: usize, clen: usize, f: impl Fn(usize) -> bool) -> EvSeq {
        EvSeq {
            prefix: (0..plen).map(&f).collect(),
            cycle: (plen..plen + clen).map(&f).collect(),
        }
    }

    pub fn not(&self) -> EvSeq {
        EvSeq {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            cycle: self.cycle.iter().map(|b| !b).collect(),
        }
    }

    pub fn and(&self, other: &EvSeq) -> EvSeq {
        let (p, c) = self.joint_shape(other);
        EvSeq::from_fn(p, c, |i| self.at(i) && other.at(i))
    }

    pub fn or(&self, other: &EvSeq) -> EvSeq {
        let (p, c) = self.joint_shape(other);
        EvSeq::from_fn(p, c, |i| self.at(i) || other.at(i))
    }

    /// `X`: shift left by one.
    pub fn next(&self) -> EvSeq {
        if self.prefix.is_empty() {
            let l = self.cycle.len();
            EvSeq::from_fn(0, l, |i| self.cycle[(i + 1) % l])
        } else {
            EvSeq { prefix: self.prefix[1..].to_vec(), cycle: self.cycle.clone() }
        }
    }

    /// `Y`/`wY`: shift right by one; `at_zero` is the value at position 0.
    pub fn previous(&self, at_zero: bool) -> EvSeq {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(at_zero);
        prefix.extend_from_slice(&self.prefix);
        EvSeq { prefix, cycle: self.cycle.clone() }
    }

    /// `a U b`. On the cycle, a witness within one period is exhaustive: the
    /// window `i .. i+len` visits every cycle position once, so if `b` never
    /// holds there it never holds in the tail at all, and any longer witness
    /// can be shortened by one full period.
    pub fn until(&self, rhs: &EvSeq) -> EvSeq {
        let (plen, clen) = self.joint_shape(rhs);
        let mut cycle = vec![false; clen];
        for (j, slot) in cycle.iter_mut().enumerate() {
            let start = plen + j;
            let mut ok = false;
            for k in 0..clen {
                if rhs.at(start + k) {
                    ok = true;
                    break;
                }
                if !self.at(start + k) {
                    break;
                }
            }
            *slot = ok;
        }
        let mut prefix = vec![false; plen];
        let mut after = cycle[0];
        for i in (0..plen).rev() {
            after = rhs.at(i) || (self.at(i) && after);
            prefix[i] = after;
        }
        EvSeq { prefix, cycle }
    }

    /// `a S b`: forward recurrence; two extra periods always suffice for the
    /// carry bit to stabilize because the period-to-period state map is
    /// monotone on a single bit and hence idempotent.
    pub fn since(&self, rhs: &EvSeq) -> EvSeq {
        let (plen, clen) = self.joint_shape(rhs);
        let total = plen + 2 * clen;
        let mut vals = Vec::with_capacity(total);
        let mut carry = false;
        for i in 0..total {
            carry = rhs.at(i) || (self.at(i) && carry);
            vals.push(carry);
        }
        let cycle = vals.split_off(plen + clen);
        EvSeq { prefix: vals, cycle }
    }

    pub fn eventually(&self) -> EvSeq {
        EvSeq::constant(true).until(self)
    }

    pub fn always(&self) -> EvSeq {
        self.not().eventually().not()
    }

    /// `Finf`: the value is the same at every position.
    pub fn infinitely_often(&self) -> EvSeq {
        EvSeq::constant(self.cycle.iter().any(|&b| b))
    }

    /// `Ginf`.
    pub fn almost_always(&self) -> EvSeq {
        EvSeq::constant(self.cycle.iter().all(|&b| b))
    }
}
