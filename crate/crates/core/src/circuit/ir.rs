use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Op {
    And,
    Or,
    Not,
    Nop,
    ConstTrue,
    ConstFalse,
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::And | Op::Or => 2,
            Op::Not | Op::Nop => 1,
            Op::ConstTrue | Op::ConstFalse => 0,
        }
    }

    fn apply(self, args: &[bool]) -> bool {
        match self {
            Op::And => args[0] && args[1],
            Op::Or => args[0] || args[1],
            Op::Not => !args[0],
            Op::Nop => args[0],
            Op::ConstTrue => true,
            Op::ConstFalse => false,
        }
    }
}

/// A wire: a circuit input or the output of a gate. Serializes as
/// `{"input": j}` or `{"gate": i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ref {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub id: usize,
    pub op: Op,
    #[serde(default)]
    pub args: Vec<Ref>,
}

/// Boolean circuit with fan-in at most two. Gate `i` lives at `gates[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    #[serde(rename = "inputs")]
    pub input_count: usize,
    pub gates: Vec<Gate>,
    pub outputs: Vec<Ref>,
}

impl Circuit {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let mut c: Circuit = serde_json::from_str(s)?;
        c.gates.sort_by_key(|g| g.id);
        c.validate()?;
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    fn check_ref(&self, r: Ref, context: &str) -> Result<()> {
        let ok = match r {
            Ref::Input(j) => j < self.input_count,
            Ref::Gate(i) => i < self.gates.len(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Circuit(format!("{context} references missing {r:?}")))
        }
    }

    /// Checks ids, arities and references; returns gate indices in topological order.
    pub fn validate(&self) -> Result<Vec<usize>> {
        for (pos, g) in self.gates.iter().enumerate() {
            if g.id != pos {
                return Err(Error::Circuit(format!(
                    "gate ids must be dense 0..{}; found id {} at position {pos}",
                    self.gates.len(),
                    g.id
                )));
            }
            if g.args.len() != g.op.arity() {
                return Err(Error::Circuit(format!(
                    "gate {} ({:?}) takes {} args, got {}",
                    g.id,
                    g.op,
                    g.op.arity(),
                    g.args.len()
                )));
            }
            for &a in &g.args {
                self.check_ref(a, &format!("gate {}", g.id))?;
            }
        }
        for &o in &self.outputs {
            self.check_ref(o, "output")?;
        }
        self.topological_order()
    }

    fn topological_order(&self) -> Result<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.gates.len()];
        let mut order = Vec::with_capacity(self.gates.len());
        for root in 0..self.gates.len() {
            if mark[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            mark[root] = 1;
            while let Some(&mut (g, ref mut next)) = stack.last_mut() {
                let args = &self.gates[g].args;
                if *next < args.len() {
                    let a = args[*next];
                    *next += 1;
                    if let Ref::Gate(d) = a {
                        match mark[d] {
                            0 => {
                                mark[d] = 1;
                                stack.push((d, 0));
                            }
                            1 => {
                                return Err(Error::Circuit(format!(
                                    "gate references form a cycle through gate {d}"
                                )))
                            }
                            _ => {}
                        }
                    }
                } else {
                    mark[g] = 2;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Value of every gate on input `x`.
    pub fn gate_values(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.input_count {
            return Err(Error::SizeMismatch {
                expected: self.input_count,
                got: x.len(),
            });
        }
        let order = self.validate()?;
        let mut values = vec![false; self.gates.len()];
        for g in order {
            let gate = &self.gates[g];
            let args: Vec<bool> = gate
                .args
                .iter()
                .map(|&r| match r {
                    Ref::Input(j) => x[j],
                    Ref::Gate(i) => values[i],
                })
                .collect();
            values[g] = gate.op.apply(&args);
        }
        Ok(values)
    }
}

/// Reference Boolean semantics.
pub fn evaluate(circuit: &Circuit, x: &[bool]) -> Result<Vec<bool>> {
    let values = circuit.gate_values(x)?;
    Ok(circuit
        .outputs
        .iter()
        .map(|&r| match r {
            Ref::Input(j) => x[j],
            Ref::Gate(i) => values[i],
        })
        .collect())
}

/// Appends gates one at a time; ids follow insertion order.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    input_count: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(input_count: usize) -> Self {
        CircuitBuilder {
            input_count,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, j: usize) -> Ref {
        assert!(j < self.input_count, "input {j} out of range");
        Ref::Input(j)
    }

    pub fn gate(&mut self, op: Op, args: &[Ref]) -> Ref {
        let id = self.gates.len();
        self.gates.push(Gate {
            id,
            op,
            args: args.to_vec(),
        });
        Ref::Gate(id)
    }

    pub fn and(&mut self, a: Ref, b: Ref) -> Ref {
        self.gate(Op::And, &[a, b])
    }

    pub fn or(&mut self, a: Ref, b: Ref) -> Ref {
        self.gate(Op::Or, &[a, b])
    }

    pub fn not(&mut self, a: Ref) -> Ref {
        self.gate(Op::Not, &[a])
    }

    pub fn nop(&mut self, a: Ref) -> Ref {
        self.gate(Op::Nop, &[a])
    }

    pub fn constant(&mut self, value: bool) -> Ref {
        self.gate(if value { Op::ConstTrue } else { Op::ConstFalse }, &[])
    }

    /// Balanced OR tree; the empty disjunction is the constant false.
    pub fn or_all(&mut self, refs: &[Ref]) -> Ref {
        self.reduce(refs, Op::Or, false)
    }

    /// Balanced AND tree; the empty conjunction is the constant true.
    pub fn and_all(&mut self, refs: &[Ref]) -> Ref {
        self.reduce(refs, Op::And, true)
    }

    fn reduce(&mut self, refs: &[Ref], op: Op, empty: bool) -> Ref {
        match refs {
            [] => self.constant(empty),
            [single] => *single,
            _ => {
                let (l, r) = refs.split_at(refs.len() / 2);
                let l = self.reduce(l, op, empty);
                let r = self.reduce(r, op, empty);
                self.gate(op, &[l, r])
            }
        }
    }

    pub fn finish(self, outputs: Vec<Ref>) -> Circuit {
        Circuit {
            input_count: self.input_count,
            gates: self.gates,
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_not_semantics() {
        let mut b = CircuitBuilder::new(2);
        let g = b.and(Ref::Input(0), Ref::Input(1));
        let and = b.finish(vec![g]);
        assert_eq!(evaluate(&and, &[true, true]).unwrap(), vec![true]);
        assert_eq!(evaluate(&and, &[true, false]).unwrap(), vec![false]);

        let mut b = CircuitBuilder::new(1);
        let g = b.not(Ref::Input(0));
        let not = b.finish(vec![g]);
        assert_eq!(evaluate(&not, &[false]).unwrap(), vec![true]);
        assert!(matches!(evaluate(&not, &[]), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn json_format() {
        let text = r#"{"inputs":2,"gates":[{"id":0,"op":"AND","args":[{"input":0},{"input":1}]},{"id":1,"op":"CONST_TRUE","args":[]}],"outputs":[{"gate":0},{"gate":1}]}"#;
        let c = Circuit::from_json_str(text).unwrap();
        assert_eq!(c.gates[1].op, Op::ConstTrue);
        assert_eq!(c.to_json_string(), text);
    }

    #[test]
    fn rejects_malformed() {
        let bad_ref = r#"{"inputs":1,"gates":[{"id":0,"op":"NOT","args":[{"input":3}]}],"outputs":[{"gate":0}]}"#;
        assert!(matches!(Circuit::from_json_str(bad_ref), Err(Error::Circuit(_))));
        let bad_arity = r#"{"inputs":1,"gates":[{"id":0,"op":"AND","args":[{"input":0}]}],"outputs":[]}"#;
        assert!(Circuit::from_json_str(bad_arity).is_err());
        let cyclic = r#"{"inputs":0,"gates":[{"id":0,"op":"NOT","args":[{"gate":1}]},{"id":1,"op":"NOT","args":[{"gate":0}]}],"outputs":[]}"#;
        assert!(Circuit::from_json_str(cyclic).unwrap_err().to_string().contains("cycle"));
        let sparse = r#"{"inputs":0,"gates":[{"id":1,"op":"CONST_TRUE"}],"outputs":[]}"#;
        assert!(Circuit::from_json_str(sparse).is_err());
    }

    #[test]
    fn reductions() {
        let mut b = CircuitBuilder::new(3);
        let ins: Vec<Ref> = (0..3).map(Ref::Input).collect();
        let any = b.or_all(&ins);
        let all = b.and_all(&ins);
        let none = b.or_all(&[]);
        let c = b.finish(vec![any, all, none]);
        for x in 0..8u32 {
            let bits: Vec<bool> = (0..3).map(|i| x >> i & 1 == 1).collect();
            let out = evaluate(&c, &bits).unwrap();
            assert_eq!(out, vec![x != 0, x == 7, false]);
        }
    }

    #[test]
    fn gates_may_reference_later_ids() {
        let text = r#"{"inputs":1,"gates":[{"id":0,"op":"NOT","args":[{"gate":1}]},{"id":1,"op":"NOP","args":[{"input":0}]}],"outputs":[{"gate":0}]}"#;
        let c = Circuit::from_json_str(text).unwrap();
        assert_eq!(evaluate(&c, &[true]).unwrap(), vec![false]);
    }
}
