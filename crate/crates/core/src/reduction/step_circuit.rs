use super::tm::{Move, ToyTM};
use crate::circuit::{Circuit, CircuitBuilder, Ref};

/// Circuit mapping a configuration encoding to its successor's encoding,
/// plus a flag that is raised on halting or malformed encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCircuit {
    /// `n` inputs and `n` outputs.
    pub circuit: Circuit,
    pub halt_flag: Ref,
}

impl StepCircuit {
    /// The same gates with the halt flag appended as output `n`.
    pub fn with_flag_output(&self) -> Circuit {
        let mut c = self.circuit.clone();
        c.outputs.push(self.halt_flag);
        c
    }
}

fn exactly_one(b: &mut CircuitBuilder, bits: &[Ref]) -> Ref {
    let any = b.or_all(bits);
    let mut pairs = Vec::new();
    for i in 0..bits.len() {
        for j in i + 1..bits.len() {
            pairs.push(b.and(bits[i], bits[j]));
        }
    }
    let two = b.or_all(&pairs);
    let not_two = b.not(two);
    b.and(any, not_two)
}

pub fn step_circuit(tm: &ToyTM) -> StepCircuit {
    let q = tm.state_count();
    let m = tm.tape_len();
    let mut b = CircuitBuilder::new(q + 2 * m);
    let st: Vec<Ref> = (0..q).map(Ref::Input).collect();
    let hd: Vec<Ref> = (q..q + m).map(Ref::Input).collect();
    let tp: Vec<Ref> = (q + m..q + 2 * m).map(Ref::Input).collect();

    let scanned: Vec<Ref> = (0..m).map(|j| b.and(hd[j], tp[j])).collect();
    let read = b.or_all(&scanned);
    let not_read = b.not(read);

    // One selector per applicable (state, symbol) rule.
    let mut write = Vec::new();
    let mut moves: [Vec<Ref>; 3] = Default::default();
    let mut next: Vec<Vec<Ref>> = vec![Vec::new(); q];
    for s in 0..q {
        for symbol in [false, true] {
            let Some(t) = tm.transition(s, symbol) else { continue };
            let sel = b.and(st[s], if symbol { read } else { not_read });
            if t.write {
                write.push(sel);
            }
            let slot = match t.shift {
                Move::L => 0,
                Move::R => 1,
                Move::S => 2,
            };
            moves[slot].push(sel);
            next[t.next].push(sel);
        }
    }
    let w = b.or_all(&write);
    let [left, right, stay] = moves.map(|v| b.or_all(&v));

    let mut outputs = Vec::with_capacity(q + 2 * m);
    for terms in &next {
        outputs.push(b.or_all(terms));
    }
    for j in 0..m {
        let mut keep = vec![stay];
        if j == 0 {
            keep.push(left);
        }
        if j == m - 1 {
            keep.push(right);
        }
        let keep = b.or_all(&keep);
        let mut terms = vec![b.and(hd[j], keep)];
        if j > 0 {
            terms.push(b.and(hd[j - 1], right));
        }
        if j + 1 < m {
            terms.push(b.and(hd[j + 1], left));
        }
        outputs.push(b.or_all(&terms));
    }
    for j in 0..m {
        let written = b.and(hd[j], w);
        let away = b.not(hd[j]);
        let kept = b.and(away, tp[j]);
        outputs.push(b.or(written, kept));
    }

    let halting: Vec<Ref> = (0..q).filter(|&s| tm.is_halting(s)).map(|s| st[s]).collect();
    let halted = b.or_all(&halting);
    let one_state = exactly_one(&mut b, &st);
    let one_head = exactly_one(&mut b, &hd);
    let well_formed = b.and(one_state, one_head);
    let malformed = b.not(well_formed);
    let halt_flag = b.or(halted, malformed);

    StepCircuit {
        circuit: b.finish(outputs),
        halt_flag,
    }
}
