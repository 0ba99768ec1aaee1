//! The stack virtual machine: instruction set, one-step transition, and the
//! fuel-bounded executor.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::semantics::{normalize32, EvalMode, State};
use crate::syntax::Ident;

/// VM instructions. Branch offsets are relative to the *next* instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instr {
    /// Push a constant.
    Const(BigInt),
    /// Push the value of a variable.
    Var(Ident),
    /// Pop a value and assign it to a variable.
    Setvar(Ident),
    /// Pop two values, push their sum.
    Add,
    /// Pop two values, push their difference.
    Sub,
    /// Unconditional jump.
    Branch(i64),
    /// Pop two values, jump if they differ.
    Bne(i64),
    /// Pop two values, jump if the deeper one is >= the top one.
    Bge(i64),
    /// End of program.
    Halt,
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Const(n) => write!(f, "const {n}"),
            Instr::Var(x) => write!(f, "var {x}"),
            Instr::Setvar(x) => write!(f, "setvar {x}"),
            Instr::Add => write!(f, "add"),
            Instr::Sub => write!(f, "sub"),
            Instr::Branch(d) => write!(f, "branch {d}"),
            Instr::Bne(d) => write!(f, "bne {d}"),
            Instr::Bge(d) => write!(f, "bge {d}"),
            Instr::Halt => write!(f, "halt"),
        }
    }
}

/// A fixed list of instructions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Code(pub Vec<Instr>);

impl Code {
    pub fn len(&self) -> i64 {
        self.0.len() as i64
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The instruction at `pc`, defined iff `0 <= pc < len`.
    pub fn at(&self, pc: i64) -> Option<&Instr> {
        usize::try_from(pc).ok().and_then(|i| self.0.get(i))
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Instr> {
        self.0.iter()
    }
}

impl From<Vec<Instr>> for Code {
    fn from(instrs: Vec<Instr>) -> Self {
        Code(instrs)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, instr) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{instr}")?;
        }
        Ok(())
    }
}

/// A machine configuration: program counter, operand stack, store.
///
/// The top of the stack is the **last** element of `stack`; traces print it
/// top-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState {
    pub pc: i64,
    pub stack: Vec<BigInt>,
    pub store: State,
}

impl MachineState {
    pub fn new(store: State) -> MachineState {
        MachineState {
            pc: 0,
            stack: Vec::new(),
            store,
        }
    }

    /// Stack rendered top-first, as transition tables conventionally list it.
    pub fn stack_top_first(&self) -> Vec<BigInt> {
        self.stack.iter().rev().cloned().collect()
    }
}

impl fmt::Display for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pc={}, stack=[", self.pc)?;
        for (i, v) in self.stack.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "], store={})", self.store)
    }
}

/// Why a non-halt configuration had no successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StuckReason {
    BadPc,
    StackUnderflow,
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::BadPc => write!(f, "program counter out of range"),
            StuckReason::StackUnderflow => write!(f, "stack underflow"),
        }
    }
}

/// Result of a bounded VM run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VmOutcome {
    /// The current instruction is `halt`.
    Halted { store: State, steps: u64 },
    Stuck { reason: StuckReason, at: MachineState },
    OutOfFuel { at: MachineState },
}

impl fmt::Display for VmOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VmOutcome::Halted { store, steps } => {
                write!(f, "halted after {steps} steps with store {store}")
            }
            VmOutcome::Stuck { reason, at } => write!(f, "stuck ({reason}) at {at}"),
            VmOutcome::OutOfFuel { at } => write!(f, "out of fuel at {at}"),
        }
    }
}

fn wrap(mode: EvalMode, n: BigInt) -> BigInt {
    match mode {
        EvalMode::Wrap32 => normalize32(&n),
        _ => n,
    }
}

/// Performs one machine transition, or `None` when no rule applies: the pc
/// is out of range, the instruction is `halt`, or the stack is too short.
///
/// Branch targets are `pc + 1 + offset`. The conditional branches pop the
/// top value `n2` and the next value `n1`: `bne` jumps when `n1 != n2`,
/// `bge` jumps when `n1 >= n2`; both fall through to `pc + 1` otherwise.
pub fn vm_step(code: &Code, m: &MachineState, mode: EvalMode) -> Option<MachineState> {
    let instr = code.at(m.pc)?;
    let next_pc = m.pc.checked_add(1)?;
    let jump = |delta: i64| next_pc.checked_add(delta);
    let mut stack = m.stack.clone();
    match instr {
        Instr::Halt => None,
        Instr::Const(n) => {
            stack.push(wrap(mode, n.clone()));
            Some(MachineState {
                pc: next_pc,
                stack,
                store: m.store.clone(),
            })
        }
        Instr::Var(x) => {
            stack.push(wrap(mode, m.store.get(x)));
            Some(MachineState {
                pc: next_pc,
                stack,
                store: m.store.clone(),
            })
        }
        Instr::Setvar(x) => {
            let n = stack.pop()?;
            Some(MachineState {
                pc: next_pc,
                stack,
                store: m.store.update(x.clone(), n),
            })
        }
        Instr::Add => {
            let n2 = stack.pop()?;
            let n1 = stack.pop()?;
            stack.push(wrap(mode, n1 + n2));
            Some(MachineState {
                pc: next_pc,
                stack,
                store: m.store.clone(),
            })
        }
        Instr::Sub => {
            let n2 = stack.pop()?;
            let n1 = stack.pop()?;
            stack.push(wrap(mode, n1 - n2));
            Some(MachineState {
                pc: next_pc,
                stack,
                store: m.store.clone(),
            })
        }
        Instr::Branch(d) => Some(MachineState {
            pc: jump(*d)?,
            stack,
            store: m.store.clone(),
        }),
        Instr::Bne(d) => {
            let n2 = stack.pop()?;
            let n1 = stack.pop()?;
            let pc = if n1 != n2 { jump(*d)? } else { next_pc };
            Some(MachineState {
                pc,
                stack,
                store: m.store.clone(),
            })
        }
        Instr::Bge(d) => {
            let n2 = stack.pop()?;
            let n1 = stack.pop()?;
            let pc = if n1 >= n2 { jump(*d)? } else { next_pc };
            Some(MachineState {
                pc,
                stack,
                store: m.store.clone(),
            })
        }
    }
}

fn stuck_reason(code: &Code, m: &MachineState) -> StuckReason {
    match code.at(m.pc) {
        None => StuckReason::BadPc,
        Some(instr) => {
            let needed = match instr {
                Instr::Setvar(_) => 1,
                Instr::Add | Instr::Sub | Instr::Bne(_) | Instr::Bge(_) => 2,
                _ => 0,
            };
            if m.stack.len() < needed {
                StuckReason::StackUnderflow
            } else {
                // in-range pc, enough operands: the step failed computing a
                // branch target
                StuckReason::BadPc
            }
        }
    }
}

fn run(
    code: &Code,
    m0: MachineState,
    fuel: u64,
    mode: EvalMode,
    mut trace: Option<&mut Vec<MachineState>>,
) -> VmOutcome {
    let mut m = m0;
    if let Some(t) = trace.as_deref_mut() {
        t.push(m.clone());
    }
    let mut steps = 0u64;
    loop {
        if code.at(m.pc) == Some(&Instr::Halt) {
            return VmOutcome::Halted {
                store: m.store,
                steps,
            };
        }
        if steps == fuel {
            return VmOutcome::OutOfFuel { at: m };
        }
        match vm_step(code, &m, mode) {
            Some(next) => {
                m = next;
                steps += 1;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(m.clone());
                }
            }
            None => {
                let reason = stuck_reason(code, &m);
                return VmOutcome::Stuck { reason, at: m };
            }
        }
    }
}

/// Iterates [`vm_step`] up to `fuel` times.
pub fn vm_run(code: &Code, m0: MachineState, fuel: u64, mode: EvalMode) -> VmOutcome {
    run(code, m0, fuel, mode, None)
}

/// Like [`vm_run`], also returning every machine state visited (the initial
/// one included).
pub fn vm_run_traced(
    code: &Code,
    m0: MachineState,
    fuel: u64,
    mode: EvalMode,
) -> (VmOutcome, Vec<MachineState>) {
    let mut trace = Vec::new();
    let outcome = run(code, m0, fuel, mode, Some(&mut trace));
    (outcome, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Ident {
        Ident::new(s).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    // `var x; const 1; add; setvar x; branch -5` from {x=12}
    fn increment_loop() -> Code {
        Code(alloc::vec![
            Instr::Var(id("x")),
            Instr::Const(1.into()),
            Instr::Add,
            Instr::Setvar(id("x")),
            Instr::Branch(-5),
        ])
    }

    #[test]
    fn const_pushes() {
        let code = Code(alloc::vec![Instr::Const(1.into())]);
        let m = MachineState {
            pc: 0,
            stack: alloc::vec![big(12)],
            store: State::new(),
        };
        let next = vm_step(&code, &m, EvalMode::Math).unwrap();
        assert_eq!(next.pc, 1);
        assert_eq!(next.stack_top_first(), [big(1), big(12)]);
    }

    #[test]
    fn add_pops_two_pushes_sum() {
        let code = Code(alloc::vec![Instr::Halt, Instr::Halt, Instr::Add]);
        let m = MachineState {
            pc: 2,
            stack: alloc::vec![big(12), big(1)], // top = 1
            store: State::new(),
        };
        let next = vm_step(&code, &m, EvalMode::Math).unwrap();
        assert_eq!(next.pc, 3);
        assert_eq!(next.stack_top_first(), [big(13)]);
    }

    #[test]
    fn branch_is_relative_to_next_instruction() {
        let code = increment_loop();
        let m = MachineState {
            pc: 4,
            stack: alloc::vec![],
            store: State::new(),
        };
        let next = vm_step(&code, &m, EvalMode::Math).unwrap();
        assert_eq!(next.pc, 0);
    }

    #[test]
    fn add_underflows_on_empty_stack() {
        let code = Code(alloc::vec![Instr::Add]);
        let m = MachineState::new(State::new());
        assert_eq!(vm_step(&code, &m, EvalMode::Math), None);
        assert!(matches!(
            vm_run(&code, MachineState::new(State::new()), 10, EvalMode::Math),
            VmOutcome::Stuck {
                reason: StuckReason::StackUnderflow,
                ..
            }
        ));
    }

    #[test]
    fn out_of_range_pc_is_stuck_bad_pc() {
        let code = Code(alloc::vec![Instr::Branch(5)]);
        assert!(matches!(
            vm_run(&code, MachineState::new(State::new()), 10, EvalMode::Math),
            VmOutcome::Stuck {
                reason: StuckReason::BadPc,
                ..
            }
        ));
    }

    #[test]
    fn halt_at_pc_zero_takes_zero_steps() {
        let code = Code(alloc::vec![Instr::Halt]);
        let store = State::from_bindings([(id("x"), big(3))]);
        match vm_run(&code, MachineState::new(store.clone()), 99, EvalMode::Math) {
            VmOutcome::Halted { store: s, steps } => {
                assert_eq!(steps, 0);
                assert_eq!(s, store);
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn increment_loop_reproduces_the_transition_table() {
        let code = increment_loop();
        let m0 = MachineState::new(State::from_bindings([(id("x"), big(12))]));
        let (outcome, trace) = vm_run_traced(&code, m0, 5, EvalMode::Math);
        assert!(matches!(outcome, VmOutcome::OutOfFuel { .. }));

        let expect: [(i64, &[i64], i64); 6] = [
            (0, &[], 12),
            (1, &[12], 12),
            (2, &[1, 12], 12),
            (3, &[13], 12),
            (4, &[], 13),
            (0, &[], 13), // branch(-5) wraps the pc back to 0
        ];
        assert_eq!(trace.len(), expect.len());
        for (m, (pc, stack, x)) in trace.iter().zip(expect) {
            assert_eq!(m.pc, pc);
            let want: Vec<BigInt> = stack.iter().map(|&v| big(v)).collect();
            assert_eq!(m.stack_top_first(), want);
            assert_eq!(m.store.get(&id("x")), big(x));
        }
    }

    #[test]
    fn infinite_loop_runs_out_of_fuel() {
        let code = increment_loop();
        let m0 = MachineState::new(State::from_bindings([(id("x"), big(12))]));
        assert!(matches!(
            vm_run(&code, m0, 100, EvalMode::Math),
            VmOutcome::OutOfFuel { .. }
        ));
    }

    #[test]
    fn bne_bge_operand_order() {
        // stack n2.n1 with n2 on top; bge jumps when n1 >= n2
        let code = Code(alloc::vec![Instr::Bge(3)]);
        let mk = |n1: i64, n2: i64| MachineState {
            pc: 0,
            stack: alloc::vec![big(n1), big(n2)],
            store: State::new(),
        };
        assert_eq!(vm_step(&code, &mk(5, 3), EvalMode::Math).unwrap().pc, 4);
        assert_eq!(vm_step(&code, &mk(3, 5), EvalMode::Math).unwrap().pc, 1);
        assert_eq!(vm_step(&code, &mk(3, 3), EvalMode::Math).unwrap().pc, 4);

        let code = Code(alloc::vec![Instr::Bne(3)]);
        assert_eq!(vm_step(&code, &mk(5, 3), EvalMode::Math).unwrap().pc, 4);
        assert_eq!(vm_step(&code, &mk(3, 3), EvalMode::Math).unwrap().pc, 1);
    }

    #[test]
    fn wrap32_applies_to_arithmetic() {
        let max = (BigInt::from(1) << 31) - 1;
        let code = Code(alloc::vec![
            Instr::Const(max),
            Instr::Const(1.into()),
            Instr::Add,
            Instr::Setvar(id("x")),
            Instr::Halt,
        ]);
        match vm_run(&code, MachineState::new(State::new()), 10, EvalMode::Wrap32) {
            VmOutcome::Halted { store, .. } => {
                assert_eq!(store.get(&id("x")), -(BigInt::from(1) << 31));
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn code_display_one_instruction_per_line() {
        let text = increment_loop().to_string();
        assert_eq!(text, "var x\nconst 1\nadd\nsetvar x\nbranch -5");
    }
}
