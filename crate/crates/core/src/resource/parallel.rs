//! Parallel non-erasing ε-reduction `⇉`.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::subst::instantiate;
use super::{app_sum, bag_sum, lam_sum, Bag, BagSum, Res, ResSum, Sum};

struct Capped {
    cap: usize,
}

impl Capped {
    fn check<T>(&self, set: BTreeSet<T>) -> Option<BTreeSet<T>> {
        (set.len() <= self.cap).then_some(set)
    }

    fn term(&self, t: &Res) -> Option<BTreeSet<ResSum>> {
        let mut out = BTreeSet::new();
        match t {
            Res::Var(_) => {
                out.insert(Sum::single(t.clone()));
            }
            Res::Lam(h, b) => {
                for s in self.term(b)? {
                    out.insert(lam_sum(*h, &s));
                }
            }
            Res::App(f, bag) => {
                let fs = self.term(f)?;
                let bags = self.bag(bag)?;
                for s in &fs {
                    for b in &bags {
                        out.insert(app_sum(s, b));
                    }
                }
                match &**f {
                    Res::Lam(_, body) if body.mentions_bound(0) => {
                        for s in self.term(body)? {
                            for b in &bags {
                                out.insert(s.flat_map(|s2| b.flat_map(|b2| instantiate(s2, b2))));
                            }
                        }
                    }
                    Res::App(g, tb) => {
                        if let Res::Lam(h, s) = &**g {
                            let ss = self.term(s)?;
                            let tbs = self.bag(tb)?;
                            for s1 in &ss {
                                for q1 in &bags {
                                    let inner = app_sum(s1, &q1.map(|q| q.shift(1, 0)));
                                    let lam = lam_sum(*h, &inner);
                                    for t1 in &tbs {
                                        out.insert(app_sum(&lam, t1));
                                    }
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        self.check(out)
    }

    fn bag(&self, bag: &Bag) -> Option<BTreeSet<BagSum>> {
        let mut acc: BTreeSet<Vec<ResSum>> = [Vec::new()].into_iter().collect();
        for t in bag.items() {
            let choices = self.term(t)?;
            let mut next = BTreeSet::new();
            for prefix in &acc {
                for c in &choices {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    next.insert(p);
                }
            }
            acc = self.check(next)?;
        }
        self.check(acc.iter().map(|parts| bag_sum(parts)).collect())
    }
}

/// Every `σ` with `e ⇉ σ`, or `None` when some intermediate set of
/// reducts exceeds `cap`.
pub fn parallel_successors_capped(e: &Res, cap: usize) -> Option<BTreeSet<ResSum>> {
    Capped { cap }.term(e)
}

pub fn parallel_successors(e: &Res) -> BTreeSet<ResSum> {
    Capped { cap: usize::MAX }.term(e).expect("an uncapped enumeration cannot overflow")
}

/// `⇉` on sums: every copy of every support element takes its own parallel
/// step. `None` when the number of results would exceed `cap`.
pub fn par_sum_successors(sum: &ResSum, cap: usize) -> Option<BTreeSet<ResSum>> {
    let mut acc: BTreeSet<ResSum> = [Sum::zero()].into_iter().collect();
    for (t, c) in sum {
        let copies = c.to_usize().filter(|&n| n <= cap)?;
        let options: Vec<ResSum> = parallel_successors_capped(t, cap)?.into_iter().collect();
        let mut per_term: BTreeSet<ResSum> = BTreeSet::new();
        multisets(&options, copies, 0, Sum::zero(), &mut per_term, cap)?;
        let mut next = BTreeSet::new();
        for a in &acc {
            for p in &per_term {
                let mut s = a.clone();
                s.add_sum(p);
                next.insert(s);
                if next.len() > cap {
                    return None;
                }
            }
        }
        acc = next;
    }
    Some(acc)
}

fn multisets(
    options: &[ResSum],
    left: usize,
    from: usize,
    acc: ResSum,
    out: &mut BTreeSet<ResSum>,
    cap: usize,
) -> Option<()> {
    if left == 0 {
        out.insert(acc);
        return (out.len() <= cap).then_some(());
    }
    for i in from..options.len() {
        let mut next = acc.clone();
        next.add_sum(&options[i]);
        multisets(options, left - 1, i, next, out, cap)?;
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::super::{parse_res, parse_res_sum, ResStrategyKind};
    use super::*;

    fn s(t: &str) -> Res {
        parse_res(t).unwrap()
    }

    #[test]
    fn examples() {
        let e = s("<\\x. <x>[]>[y]");
        let succ = parallel_successors(&e);
        assert!(succ.contains(&Sum::single(e.clone())));
        assert!(succ.contains(&parse_res_sum("<y>[]").unwrap()));
        assert_eq!(parallel_successors(&s("x")), [Sum::single(s("x"))].into_iter().collect());
    }

    #[test]
    fn contains_one_step() {
        let e = s("<<\\x. <x>[x]>[<\\z. z>[u], v]>[<\\w. y>[t]]");
        let par = parallel_successors(&e);
        for step in e.successors(ResStrategyKind::EpsilonNonErasing) {
            assert!(par.contains(&step), "{step}");
        }
    }

    #[test]
    fn sums_choose_per_copy() {
        let start = parse_res_sum("2*<\\x. x>[y]").unwrap();
        let succ = par_sum_successors(&start, 100).unwrap();
        assert_eq!(succ.len(), 3);
        assert!(succ.contains(&parse_res_sum("<\\x. x>[y] + y").unwrap()));
    }
}
