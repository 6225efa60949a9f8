//! Axioms of HT#: the recursive definition of Start (D0), Atleast and
//! Atmost in terms of Start (D1), induction instances, a finite fragment
//! of Std, and the Defs equivalences.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::fol::{lex_less, ArithOp, FamilyBody, FamilyKind, FoTerm, FolError, Formula, Variable};
use crate::term::{PrecomputedTerm, Relation};
use crate::translate::FreshNames;

fn vt(v: &Variable) -> FoTerm {
    FoTerm::var(v)
}

fn vts(vs: &[Variable]) -> Vec<FoTerm> {
    vs.iter().map(vt).collect()
}

fn plus(t: FoTerm, n: i64) -> FoTerm {
    FoTerm::binary(ArithOp::Add, t, FoTerm::int(n)).expect("integer term")
}

fn names_of(body: &FamilyBody) -> FreshNames {
    let mut names: BTreeSet<_> = body.formula().all_names();
    names.extend(body.bound().iter().chain(body.params()).map(|v| v.name.clone()));
    FreshNames::new(names)
}

fn start_atom(body: &Arc<FamilyBody>, xs: &[FoTerm], n: FoTerm) -> Formula {
    let mut args = xs.to_vec();
    args.extend(vts(body.params()));
    args.push(n);
    body.atom(FamilyKind::Start, args).expect("well-sorted Start atom")
}

/// The three sentences defining Start for the family.
pub fn d0_axioms(body: &Arc<FamilyBody>) -> Vec<Formula> {
    let mut fresh = names_of(body);
    let n = fresh.integer("N");
    let us = fresh.general_tuple("U", body.bound().len());
    let xs = vts(body.bound());
    let mut xvn = body.bound().to_vec();
    xvn.extend(body.params().iter().cloned());
    let xv = xvn.clone();
    xvn.push(n.clone());
    let f = body.formula().clone();

    let a1 = Formula::forall(
        xvn.clone(),
        Formula::implies(Formula::compare(vt(&n), Relation::Le, FoTerm::int(0)), start_atom(body, &xs, vt(&n))),
    );
    let a2 = Formula::forall(xv, Formula::iff(start_atom(body, &xs, FoTerm::int(1)), f.clone()));
    let order = lex_less(&xs, &vts(&us)).expect("equal lengths");
    let step = Formula::and(vec![
        f,
        Formula::exists(us.clone(), Formula::and(vec![order, start_atom(body, &vts(&us), vt(&n))])),
    ]);
    let a3 = Formula::forall(
        xvn,
        Formula::implies(
            Formula::compare(vt(&n), Relation::Gt, FoTerm::int(0)),
            Formula::iff(start_atom(body, &xs, plus(vt(&n), 1)), step),
        ),
    );
    vec![a1, a2, a3]
}

/// Definitions of Atleast and Atmost in terms of Start.
pub fn d1_axioms(body: &Arc<FamilyBody>) -> Vec<Formula> {
    let mut fresh = names_of(body);
    let y = fresh.general("Y");
    let n = fresh.integer("N");
    let mut vy = body.params().to_vec();
    vy.push(y.clone());
    let mut xn = body.bound().to_vec();
    xn.push(n.clone());
    let xs = vts(body.bound());
    let mut args = vts(body.params());
    args.push(vt(&y));
    let atleast = body.atom(FamilyKind::Atleast, args.clone()).expect("well-sorted");
    let atmost = body.atom(FamilyKind::Atmost, args).expect("well-sorted");
    let d1a = Formula::forall(
        vy.clone(),
        Formula::iff(
            atleast,
            Formula::exists(
                xn.clone(),
                Formula::and(vec![start_atom(body, &xs, vt(&n)), Formula::compare(vt(&n), Relation::Ge, vt(&y))]),
            ),
        ),
    );
    let d1b = Formula::forall(
        vy,
        Formula::iff(
            atmost,
            Formula::forall(
                xn,
                Formula::implies(start_atom(body, &xs, vt(&n)), Formula::compare(vt(&n), Relation::Le, vt(&y))),
            ),
        ),
    );
    vec![d1a, d1b]
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Atleast, Atmost and Start symbols do not share one family body")]
pub struct FamilyMismatch;

/// D1 for three symbols that must belong to the same family.
pub fn d1_axioms_checked(
    atleast: &Arc<FamilyBody>,
    atmost: &Arc<FamilyBody>,
    start: &Arc<FamilyBody>,
) -> Result<Vec<Formula>, FamilyMismatch> {
    if atleast != atmost || atleast != start {
        return Err(FamilyMismatch);
    }
    Ok(d1_axioms(atleast))
}

fn copies(xs: &[Variable], n: usize, fresh: &mut FreshNames) -> Vec<Vec<Variable>> {
    (0..n)
        .map(|_| xs.iter().map(|x| Variable::general(&fresh.fresh_indexed(&x.name))).collect())
        .collect()
}

fn instance(f: &Formula, xs: &[Variable], ys: &[Variable]) -> Formula {
    let map: Vec<(Variable, FoTerm)> = xs.iter().cloned().zip(ys.iter().map(vt)).collect();
    f.substitute(&map).expect("general for general")
}

fn tuple_eq(a: &[Variable], b: &[Variable]) -> Formula {
    Formula::and(a.iter().zip(b).map(|(x, y)| Formula::eq(vt(x), vt(y))).collect())
}

fn fresh_for(xs: &[Variable], f: &Formula) -> FreshNames {
    let mut names = f.all_names();
    names.extend(xs.iter().map(|v| v.name.clone()));
    FreshNames::new(names)
}

/// ∃≥r X F: at least r distinct tuples satisfy F.
pub fn exists_geq(r: &PrecomputedTerm, xs: &[Variable], f: &Formula) -> Formula {
    let n = match r {
        PrecomputedTerm::Numeral(_) => match r.as_i64() {
            Some(n) if n <= 0 => return Formula::True,
            Some(n) => n as usize,
            None => return if r < &PrecomputedTerm::from(0) { Formula::True } else { Formula::False },
        },
        _ => return Formula::False,
    };
    let mut fresh = fresh_for(xs, f);
    let tuples = copies(xs, n, &mut fresh);
    let mut conj: Vec<Formula> = tuples.iter().map(|t| instance(f, xs, t)).collect();
    for i in 0..n {
        for j in i + 1..n {
            conj.push(Formula::not(tuple_eq(&tuples[i], &tuples[j])));
        }
    }
    Formula::exists(tuples.concat(), Formula::and(conj))
}

/// ∃≤r X F: at most r distinct tuples satisfy F.
pub fn exists_leq(r: &PrecomputedTerm, xs: &[Variable], f: &Formula) -> Formula {
    let n = match r {
        PrecomputedTerm::Numeral(_) => match r.as_i64() {
            Some(n) if n < 0 => return Formula::False,
            Some(n) => n as usize,
            None => return if r < &PrecomputedTerm::from(0) { Formula::False } else { Formula::True },
        },
        _ => return Formula::True,
    };
    let mut fresh = fresh_for(xs, f);
    let tuples = copies(xs, n + 1, &mut fresh);
    let ante: Vec<Formula> = tuples.iter().map(|t| instance(f, xs, t)).collect();
    let mut disj = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            disj.push(tuple_eq(&tuples[i], &tuples[j]));
        }
    }
    Formula::forall(tuples.concat(), Formula::implies(Formula::and(ante), Formula::or(disj)))
}

/// ∀V(Atleast(V, r) ↔ ∃≥r X F) or the Atmost analogue.
pub fn defs_axiom(kind: FamilyKind, body: &Arc<FamilyBody>, r: &PrecomputedTerm) -> Result<Formula, FolError> {
    let mut args = vts(body.params());
    args.push(FoTerm::Constant(r.clone()));
    let (atom, rhs) = match kind {
        FamilyKind::Atleast => (body.atom(kind, args)?, exists_geq(r, body.bound(), body.formula())),
        FamilyKind::Atmost => (body.atom(kind, args)?, exists_leq(r, body.bound(), body.formula())),
        FamilyKind::Start => return Err(FolError::InvalidFamily("Defs are stated for Atleast and Atmost".into())),
    };
    Ok(Formula::forall(body.params().to_vec(), Formula::iff(atom, rhs)))
}

/// (def1) and (def2) for every integer r in `lo..=hi`.
pub fn defs_axioms(body: &Arc<FamilyBody>, lo: i64, hi: i64) -> Vec<Formula> {
    let mut out = Vec::new();
    for r in lo..=hi {
        let r = PrecomputedTerm::from(r);
        for kind in [FamilyKind::Atleast, FamilyKind::Atmost] {
            out.push(defs_axiom(kind, body, &r).expect("counting kind"));
        }
    }
    out
}

fn induction(f: &Formula, n: &Variable, base: i64) -> Formula {
    let at = |t: FoTerm| f.substitute_one(n, &t).expect("integer for integer");
    let ge = Formula::compare(vt(n), Relation::Ge, FoTerm::int(base));
    let step = Formula::forall(
        vec![n.clone()],
        Formula::implies(Formula::and(vec![ge.clone(), f.clone()]), at(plus(vt(n), 1))),
    );
    let concl = Formula::forall(vec![n.clone()], Formula::implies(ge, f.clone()));
    Formula::implies(Formula::and(vec![at(FoTerm::int(base)), step]), concl).universal_closure()
}

/// Closure of F(0) ∧ ∀N(N ≥ 0 ∧ F → F(N+1)) → ∀N(N ≥ 0 → F).
pub fn ind_instance(f: &Formula, n: &Variable) -> Formula {
    induction(f, n, 0)
}

/// The same schema based at 1.
pub fn ind1_instance(f: &Formula, n: &Variable) -> Formula {
    induction(f, n, 1)
}

/// Induction on K for ∀XVN(Start(X,V,N+K) → Start(X,V,N)), the shape used
/// to show that Start is antitone in its last argument.
pub fn start_monotonicity_ind(body: &Arc<FamilyBody>) -> Formula {
    let mut fresh = names_of(body);
    let n = fresh.integer("N");
    let k = fresh.integer("K");
    let xs = vts(body.bound());
    let mut xvn = body.bound().to_vec();
    xvn.extend(body.params().iter().cloned());
    xvn.push(n.clone());
    let shifted = FoTerm::binary(ArithOp::Add, vt(&n), vt(&k)).expect("integer");
    let f = Formula::forall(xvn, Formula::implies(start_atom(body, &xs, shifted), start_atom(body, &xs, vt(&n))));
    ind_instance(&f, &k)
}

/// Atleast(args, t) ∧ Atmost(args, t).
pub fn exactly_formula(body: &Arc<FamilyBody>, args: &[FoTerm], t: FoTerm) -> Result<Formula, FolError> {
    let mut a = args.to_vec();
    a.push(t);
    Ok(Formula::and(vec![body.atom(FamilyKind::Atleast, a.clone())?, body.atom(FamilyKind::Atmost, a)?]))
}

/// A finite fragment of Std for the given constants: strict total order on
/// the general sort, distinctness and ordering of the non-numeral
/// constants, numerals below them, and contiguity of the integers.
pub fn std_theory(constants: &BTreeSet<PrecomputedTerm>) -> Vec<Formula> {
    let x = Variable::general("X");
    let y = Variable::general("Y");
    let z = Variable::general("Z");
    let (m, n, k) = (Variable::integer("M"), Variable::integer("N"), Variable::integer("K"));
    let lt = |a: &Variable, b: &Variable| Formula::compare(vt(a), Relation::Lt, vt(b));
    let mut out = vec![
        Formula::forall(vec![x.clone()], Formula::not(lt(&x, &x))),
        Formula::forall(
            vec![x.clone(), y.clone(), z.clone()],
            Formula::implies(Formula::and(vec![lt(&x, &y), lt(&y, &z)]), lt(&x, &z)),
        ),
        Formula::forall(
            vec![x.clone(), y.clone()],
            Formula::Or(vec![lt(&x, &y), Formula::eq(vt(&x), vt(&y)), lt(&y, &x)]),
        ),
        Formula::forall(
            vec![x.clone(), m.clone(), n.clone()],
            Formula::implies(
                Formula::and(vec![
                    Formula::compare(vt(&m), Relation::Le, vt(&x)),
                    Formula::compare(vt(&x), Relation::Le, vt(&n)),
                ]),
                Formula::exists(vec![k.clone()], Formula::eq(vt(&x), vt(&k))),
            ),
        ),
    ];
    let symbolic: Vec<&PrecomputedTerm> = constants.iter().filter(|c| !c.is_numeral()).collect();
    for (i, a) in symbolic.iter().enumerate() {
        for b in &symbolic[i + 1..] {
            out.push(Formula::compare(FoTerm::Constant((*a).clone()), Relation::Ne, FoTerm::Constant((*b).clone())));
        }
    }
    for w in symbolic.windows(2) {
        out.push(Formula::compare(FoTerm::Constant(w[0].clone()), Relation::Lt, FoTerm::Constant(w[1].clone())));
    }
    for c in &symbolic {
        out.push(Formula::forall(
            vec![n.clone()],
            Formula::compare(vt(&n), Relation::Lt, FoTerm::Constant((*c).clone())),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_family_body;
    use alloc::string::{String, ToString};

    fn ascii(f: &Formula) -> String {
        f.ascii().to_string()
    }

    #[test]
    fn d0_for_simple_family() {
        let fam = parse_family_body("X; : p(X)").unwrap();
        let ax = d0_axioms(&fam);
        assert_eq!(ascii(&ax[0]), "forall X N:int (N <= 0 -> start{X; : p(X)}(X, N))");
        assert_eq!(ascii(&ax[1]), "forall X (start{X; : p(X)}(X, 1) <-> p(X))");
        assert_eq!(
            ascii(&ax[2]),
            "forall X N:int (N > 0 -> (start{X; : p(X)}(X, N + 1) <-> p(X) & exists U (X < U & start{X; : p(X)}(U, N))))"
        );
        assert!(ax.iter().all(|a| a.is_closed()));
    }

    #[test]
    fn d1_for_simple_family() {
        let fam = parse_family_body("X; : p(X)").unwrap();
        let ax = d1_axioms(&fam);
        assert_eq!(
            ascii(&ax[0]),
            "forall Y (atleast{X; : p(X)}(Y) <-> exists X N:int (start{X; : p(X)}(X, N) & N >= Y))"
        );
        assert_eq!(
            ascii(&ax[1]),
            "forall Y (atmost{X; : p(X)}(Y) <-> forall X N:int (start{X; : p(X)}(X, N) -> N <= Y))"
        );
        let other = parse_family_body("X; : q(X)").unwrap();
        assert!(d1_axioms_checked(&fam, &other, &fam).is_err());
    }

    #[test]
    fn counting_quantifiers() {
        let x = Variable::general("X");
        let p = Formula::plain_atom("p", vec![vt(&x)]).unwrap();
        assert_eq!(
            ascii(&exists_geq(&PrecomputedTerm::from(2), core::slice::from_ref(&x), &p)),
            "exists X1 X2 (p(X1) & p(X2) & not X1 = X2)"
        );
        assert_eq!(exists_geq(&PrecomputedTerm::from(0), core::slice::from_ref(&x), &p), Formula::True);
        assert_eq!(exists_geq(&PrecomputedTerm::symbol("a"), core::slice::from_ref(&x), &p), Formula::False);
        assert_eq!(ascii(&exists_leq(&PrecomputedTerm::from(0), core::slice::from_ref(&x), &p)), "forall X1 (p(X1) -> false)");
        assert_eq!(
            ascii(&exists_leq(&PrecomputedTerm::from(1), core::slice::from_ref(&x), &p)),
            "forall X1 X2 (p(X1) & p(X2) -> X1 = X2)"
        );
        assert_eq!(exists_leq(&PrecomputedTerm::from(-1), core::slice::from_ref(&x), &p), Formula::False);
        assert_eq!(exists_leq(&PrecomputedTerm::symbol("a"), &[x], &p), Formula::True);
    }

    #[test]
    fn induction_shapes() {
        let n = Variable::integer("N");
        let f = Formula::plain_atom("q", vec![vt(&n)]).unwrap();
        assert_eq!(
            ascii(&ind_instance(&f, &n)),
            "q(0) & forall N:int (N >= 0 & q(N) -> q(N + 1)) -> forall N:int (N >= 0 -> q(N))"
        );
        let g = Formula::plain_atom("r", vec![]).unwrap();
        assert_eq!(ascii(&ind_instance(&g, &n)), "r & forall N:int (N >= 0 & r -> r) -> forall N:int (N >= 0 -> r)");
        let fam = parse_family_body("X; : p(X)").unwrap();
        assert!(start_monotonicity_ind(&fam).is_closed());
    }

    #[test]
    fn std_for_two_constants() {
        let cs: BTreeSet<_> = [PrecomputedTerm::symbol("a"), PrecomputedTerm::symbol("b"), PrecomputedTerm::from(1)]
            .into_iter()
            .collect();
        let ax: Vec<String> = std_theory(&cs).iter().map(ascii).collect();
        assert!(ax.contains(&"a != b".to_string()));
        assert!(ax.contains(&"a < b".to_string()));
        assert!(ax.contains(&"forall N:int (N < a)".to_string()));
        assert!(ax.contains(&"forall N:int (N < b)".to_string()));
        assert!(std_theory(&BTreeSet::new()).iter().all(|f| f.is_closed()));
    }
}
