//! Efficient occurrences of `p`.
//!
//! Every `p` in a freshly labeled process carries a distinct tag. The rules
//! move, copy (rule 6) and capture (rule 7) subterms without rebuilding them,
//! so tags travel with their occurrence; when a run halts on `p` the head's
//! tag names the occurrence that got there.

use crate::process::{Process, Stack};
use crate::term::{Node, OccTag, Term};

use super::{Machine, MachineError, TraceMode};

/// Assigns tags `1, 2, ...` to the `p` occurrences of the process, left to
/// right through the head and then the stack from the top. Existing tags are
/// replaced.
pub fn label_p(process: &Process) -> Process {
    let mut next = 0u32;
    let mut label = |t: &Term| {
        t.map_leaves(&mut |leaf| match leaf.node() {
            Node::P(_) => {
                next += 1;
                Some(Term::tagged_p(OccTag(next)))
            }
            _ => None,
        })
    };
    let head = label(&process.head);
    let items: Vec<Term> = process.stack.items().iter().map(&mut label).collect();
    Process::new(head, Stack::from_items(items))
}

/// The tag of the occurrence of `p` that reaches head position, if the run
/// halts on `p` within `fuel` steps.
pub fn efficient_occurrence(
    machine: &Machine<'_>,
    process: &Process,
    fuel: usize,
) -> Result<Option<OccTag>, MachineError> {
    Ok(machine.run(process, fuel, TraceMode::Off)?.efficient_tag)
}

/// Tags of all `p` occurrences, in labeling order.
pub fn p_tags(process: &Process) -> Vec<Option<OccTag>> {
    process
        .terms()
        .flat_map(|t| t.nodes())
        .filter_map(|t| match t.node() {
            Node::P(tag) => Some(*tag),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::SeqRegistry;
    use crate::term::Const;

    #[test]
    fn labels_left_to_right() {
        let p = Process::with_args(Term::apps(Term::constant(Const::K), [Term::p(), Term::p()]), [Term::p()]);
        let labeled = label_p(&p);
        assert_eq!(p_tags(&labeled), vec![Some(OccTag(1)), Some(OccTag(2)), Some(OccTag(3))]);
        // relabeling replaces
        assert_eq!(p_tags(&label_p(&labeled)), p_tags(&labeled));
        assert_eq!(labeled, p);
    }

    #[test]
    fn no_p_is_unchanged() {
        let p = Process::with_args(Term::constant(Const::I), [Term::q(0)]);
        assert_eq!(label_p(&p), p);
        assert!(p_tags(&p).is_empty());
    }

    #[test]
    fn efficient_examples() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let p = label_p(&Process::with_args(Term::p(), []));
        assert_eq!(efficient_occurrence(&m, &p, 10).unwrap(), Some(OccTag(1)));

        let kpp = label_p(&Process::with_args(Term::apps(Term::constant(Const::K), [Term::p(), Term::p()]), []));
        assert_eq!(efficient_occurrence(&m, &kpp, 10).unwrap(), Some(OccTag(1)));

        let qp = label_p(&Process::with_args(Term::q(0), [Term::p()]));
        assert_eq!(efficient_occurrence(&m, &qp, 10).unwrap(), None);
    }

    #[test]
    fn tags_survive_capture() {
        // cc ★ (C I I) · p · π₀ captures p inside k_π, then k_π ★ I · p restores it
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let c = Term::constant;
        let cii = Term::apps(c(Const::C), [c(Const::I), c(Const::I)]);
        let p = label_p(&Process::with_args(c(Const::Cc), [cii, Term::p()]));
        let out = m.run(&p, 100, TraceMode::Off).unwrap();
        assert!(out.halted_on_p(), "{}", out.final_process);
        assert_eq!(out.efficient_tag, Some(OccTag(1)));
    }
}
