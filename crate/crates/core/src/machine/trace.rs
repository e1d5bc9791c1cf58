use serde::Serialize;
use serde_json::json;

use crate::process::Process;
use crate::syntax::Printer;
use crate::term::{Node, OracleHandle, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TraceMode {
    #[default]
    Off,
    Summary,
    /// Summary plus the full process before every step.
    Verbose,
}

/// One rule-9 firing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCall {
    pub handle: OracleHandle,
    pub arg: usize,
}

#[derive(Clone, Debug)]
pub struct TraceEvent {
    /// 1-based step number.
    pub step: usize,
    pub rule: u8,
    /// Head of the process the rule fired on.
    pub head: String,
    /// Stack depth before the step.
    pub depth: usize,
    pub oracle: Option<OracleCall>,
    pub process: Option<Process>,
}

impl TraceEvent {
    /// `step <n> rule <r> <head> | depth <d>`
    pub fn line(&self) -> String {
        format!("step {} rule {} {} | depth {}", self.step, self.rule, self.head, self.depth)
    }

    pub fn json(&self, printer: &Printer<'_>) -> String {
        let mut value = json!({
            "step": self.step,
            "rule": self.rule,
            "head": self.head,
            "depth": self.depth,
        });
        if let Some(call) = self.oracle {
            let name = printer
                .registry
                .and_then(|r| r.name(call.handle))
                .unwrap_or_else(|| format!("h{}", call.handle.index()));
            value["oracle"] = json!({ "handle": name, "arg": call.arg });
        }
        if let Some(p) = &self.process {
            value["process"] = json!(printer.process(p));
        }
        value.to_string()
    }
}

pub(crate) fn head_name(head: &Term) -> String {
    match head.node() {
        Node::App(..) => "app".into(),
        Node::Const(c) => c.name().into(),
        Node::P(_) => "p".into(),
        Node::Q(i) => format!("q{i}"),
        Node::Oracle(h) => format!("@h{}", h.index()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Machine;
    use crate::registry::{sequence, SeqRegistry};
    use crate::term::mk_numeral;

    #[test]
    fn line_and_json_formats() {
        let reg = SeqRegistry::new();
        let h = reg.register_named("xs", sequence(|_| Term::constant(crate::term::Const::K))).unwrap();
        let p = Process::with_args(Term::app(Term::oracle(h), mk_numeral(1)), []);
        let out = Machine::new(&reg).run(&p, 10, TraceMode::Verbose).unwrap();
        assert_eq!(out.trace[0].line(), "step 1 rule 1 app | depth 0");
        assert_eq!(out.trace[1].line(), "step 2 rule 9 @h0 | depth 1");
        let printer = Printer::with_registry(&reg);
        for ev in &out.trace {
            let v: serde_json::Value = serde_json::from_str(&ev.json(&printer)).unwrap();
            assert_eq!(v["step"], ev.step);
        }
        let v: serde_json::Value = serde_json::from_str(&out.trace[1].json(&printer)).unwrap();
        assert_eq!(v["oracle"]["handle"], "xs");
        assert_eq!(v["oracle"]["arg"], 1);
        assert_eq!(v["process"], "@xs * #1 . pi0");
    }
}
