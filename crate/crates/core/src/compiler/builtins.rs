//! Named combinators with their canonical forms and λ-forms.
//!
//! | name    | canonical                       | λ-form                                   |
//! |---------|---------------------------------|------------------------------------------|
//! | `sigma` | `(BW)(C)(B)BB`                  | `λnλfλx (f)(n)fx`                        |
//! | `zero`  | `K I`                           | `λxλy y`                                 |
//! | `one`   | `K`                             | `λxλy x`                                 |
//! | `flip`  | `C I`                           | `λxλy y x`                               |
//! | `ell`   | `(C)(B)CB`, so `ℓ_t = ell t`    | `λtλkλx (k)(x)t`                         |
//! | `succ`  | same as `sigma`                 | `λkλfλx (f)(k)fx`                        |
//! | `X`     | `(W)(B)(BW)(C)B`                | `λxλf (f)(x)xf`                          |
//! | `Y`     | `X X`                           | `X X` over the λ-form of `X`             |
//! | `lt`    | see [`lt`]                      | `λiλk ((k flip)λd 0)((i flip)λd 1)`      |
//! | `chi`   | see [`chi`]                     | `λkλfλzλi ((lt i k)(f)i)z`               |
//! | `psi`   | compiled λ-form, η on           | `λgλu (Y)λhλkλf (u)(χkf)(g)λz(h k⁺)(χ)kfz` |
//!
//! `lt i k` is a boolean: `lt ī k̄ u v ≻ u` when `i < k`, else `v`.

use std::sync::LazyLock;

use crate::term::{Const, Term, ELL, SIGMA, ZERO};

use super::bracket::{compile_str, CompileError, Env};

pub const NAMES: [&str; 11] = ["sigma", "zero", "one", "flip", "lt", "ell", "succ", "X", "Y", "chi", "psi"];

fn c(k: Const) -> Term {
    Term::constant(k)
}

fn flip() -> Term {
    Term::app(c(Const::C), c(Const::I))
}

fn x_comb() -> Term {
    use Const::*;
    let bw_cb = Term::apps(c(B), [c(W), Term::app(c(C), c(B))]);
    Term::app(c(W), Term::app(c(B), bw_cb))
}

/// `B (C (C (C I F) Z)) (C (C I F) O)` with `F = flip`, `Z = K (K I)`,
/// `O = K K`; `lt i k ≻ ((k F) Z) ((i F) O)`.
fn lt() -> Term {
    use Const::*;
    let cif = Term::app(Term::app(c(C), c(I)), flip());
    let z = Term::app(c(K), ZERO.clone());
    let o = Term::app(c(K), c(K));
    let left = Term::app(c(C), Term::app(Term::app(c(C), cif.clone()), z));
    let right = Term::app(Term::app(c(C), cif), o);
    Term::apps(c(B), [left, right])
}

/// `B (B C) (B S* (C lt))`; `chi k f z i ≻ lt i k (f i) z`.
fn chi() -> Term {
    use Const::*;
    let inner = Term::apps(c(B), [super::bracket::S_STAR.clone(), Term::app(c(C), lt())]);
    Term::apps(c(B), [Term::app(c(B), c(C)), inner])
}

pub(crate) const PSI_LAMBDA: &str = r"\g u. Y (\h k f. u (chi k f (g (\z. h (succ k) (chi k f z)))))";

fn psi() -> Term {
    let env = Env::new().with_eta(true).define("Y", Term::app(x_comb(), x_comb())).define("chi", chi()).define("succ", SIGMA.clone());
    compile_str(PSI_LAMBDA, &env).expect("psi λ-form compiles")
}

static TABLE: LazyLock<Vec<(&'static str, Term)>> = LazyLock::new(|| {
    vec![
        ("sigma", SIGMA.clone()),
        ("zero", ZERO.clone()),
        ("one", c(Const::K)),
        ("flip", flip()),
        ("lt", lt()),
        ("ell", ELL.clone()),
        ("succ", SIGMA.clone()),
        ("X", x_comb()),
        ("Y", Term::app(x_comb(), x_comb())),
        ("chi", chi()),
        ("psi", psi()),
    ]
});

/// Canonical combinator form of a named builtin.
pub fn builtin(name: &str) -> Result<Term, CompileError> {
    TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.clone())
        .ok_or_else(|| CompileError::UnknownBuiltin(name.to_string()))
}

/// λ-form source of a builtin. Free names refer to other builtins and are
/// resolved by [`builtin_env`].
pub fn lambda_form(name: &str) -> Option<&'static str> {
    Some(match name {
        "sigma" => r"\n f x. f (n f x)",
        "zero" => r"\x y. y",
        "one" => r"\x y. x",
        "flip" => r"\x y. y x",
        "lt" => r"\i k. (k flip (\d. zero)) (i flip (\d. one))",
        "ell" => r"\t k x. k (x t)",
        "succ" => r"\k f x. f (k f x)",
        "X" => r"\x f. f (x x f)",
        "Y" => r"(\x f. f (x x f)) (\x f. f (x x f))",
        "chi" => r"\k f z i. lt i k (f i) z",
        "psi" => PSI_LAMBDA,
        _ => return None,
    })
}

/// An environment binding every builtin name to its canonical form.
pub fn builtin_env<'a>() -> Env<'a> {
    TABLE.iter().fold(Env::new(), |env, (name, t)| env.define(name, t.clone()))
}

/// Compiles the λ-form of `name` with η off.
pub fn compile_lambda_form(name: &str) -> Result<Term, CompileError> {
    let src = lambda_form(name).ok_or_else(|| CompileError::UnknownBuiltin(name.to_string()))?;
    compile_str(src, &builtin_env())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::equiv::{behavioral_equiv, behavioral_equiv_with, EquivConfig, Probe};
    use crate::machine::{Machine, TraceMode};
    use crate::process::Process;
    use crate::registry::SeqRegistry;
    use crate::syntax::parse_term;
    use crate::term::{mk_numeral, Class};

    #[test]
    fn printed_forms() {
        assert_eq!(builtin("sigma").unwrap(), parse_term("(BW)(C)(B)BB", None).unwrap());
        assert_eq!(builtin("flip").unwrap(), parse_term("(C)I", None).unwrap());
        assert_eq!(builtin("X").unwrap(), parse_term("(W)(B)(BW)(C)B", None).unwrap());
        let x = builtin("X").unwrap();
        assert_eq!(builtin("Y").unwrap(), Term::app(x.clone(), x));
        assert!(matches!(builtin("S"), Err(CompileError::UnknownBuiltin(_))));
    }

    #[test]
    fn all_builtins_are_pl0() {
        for name in NAMES {
            assert_eq!(builtin(name).unwrap().classify(), Class::Pl0, "{name}");
            assert!(compile_lambda_form(name).is_ok(), "{name}");
        }
    }

    #[test]
    fn lt_is_a_boolean_on_numerals() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        for i in 0..=8 {
            for k in 0..=8 {
                let p = Process::with_args(builtin("lt").unwrap(), [mk_numeral(i), mk_numeral(k), Term::q(0), Term::q(1)]);
                let out = m.run(&p, 10_000, TraceMode::Off).unwrap();
                let expected = if i < k { Term::q(0) } else { Term::q(1) };
                assert_eq!(out.final_process, Process::with_args(expected, []), "i={i} k={k}");
            }
        }
    }

    #[test]
    fn natural_arities() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        for (name, arity) in [("sigma", 3), ("zero", 2), ("one", 2), ("flip", 2), ("X", 2), ("succ", 3)] {
            let v = behavioral_equiv(&m, &builtin(name).unwrap(), &compile_lambda_form(name).unwrap(), arity, 10_000).unwrap();
            assert!(v.is_equal(), "{name}: {v:?}");
        }
    }

    #[test]
    fn chi_against_lambda_form() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let probes = [Probe::Numeric(6), Probe::Var, Probe::Var, Probe::Numeric(9)];
        let v = behavioral_equiv_with(&m, &builtin("chi").unwrap(), &compile_lambda_form("chi").unwrap(), &probes, EquivConfig::default()).unwrap();
        assert!(v.is_equal(), "{v:?}");
    }

    #[test]
    fn psi_contains_y() {
        let psi = builtin("psi").unwrap();
        let y = builtin("Y").unwrap();
        assert!(psi.nodes().any(|t| *t == y));
    }
}
