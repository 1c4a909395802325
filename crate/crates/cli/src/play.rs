//! Terminal play loop: a human takes one side, a strategy the other.
//!
//! Generic over the input and output streams so it can be driven from
//! tests with byte buffers.

use std::io::{BufRead, Write};

use tgame_core::game::MoveLedger;
use tgame_core::weights::{state_weight, vertex_color};
use tgame_core::{Decision, GameState, Hypergraph, PlayerRole, Scheme, Solver, Strategy, Transcript, VertexId};

use crate::error::CliError;

pub struct Session<'a> {
    pub hypergraph: &'a Hypergraph,
    /// Display names, one per vertex. Input accepts names or indices.
    pub names: Option<&'a [String]>,
    pub human: PlayerRole,
    pub first: PlayerRole,
    pub scheme: Option<Scheme>,
    /// Used for `hint` and the final comparison.
    pub solver: Option<&'a Solver>,
}

#[derive(Debug)]
pub enum Outcome {
    Finished(Transcript),
    /// The input ended or the human quit; the transcript is partial.
    Aborted(Transcript),
}

enum Input {
    Vertex(VertexId),
    Quit,
}

const HELP: &str = "enter a vertex index (or name), `hint` for optimal move values, `quit` to stop";

impl Session<'_> {
    fn label(&self, v: VertexId) -> String {
        match self.names {
            Some(names) if names[v] != v.to_string() => format!("{v} ({})", names[v]),
            _ => v.to_string(),
        }
    }

    fn lookup(&self, token: &str) -> Option<VertexId> {
        token
            .parse()
            .ok()
            .or_else(|| self.names?.iter().position(|n| n == token))
    }

    fn show<W: Write>(&self, state: &GameState<'_>, out: &mut W) -> Result<(), CliError> {
        let r = state.residual();
        writeln!(out, "move {}: {} to play", state.moves_played() + 1, state.to_move())?;
        let edges: Vec<String> = r
            .uncovered_edges()
            .map(|(e, vs)| {
                let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                format!("e{e} {{{}}}", vs.join(" "))
            })
            .collect();
        writeln!(out, "uncovered edges ({}): {}", edges.len(), edges.join("  "))?;
        let degrees: Vec<String> = r
            .active_vertices()
            .map(|v| match self.scheme {
                Some(s) => format!("{v}:{} {}", r.degree(v), vertex_color(v, &r, s)),
                None => format!("{v}:{}", r.degree(v)),
            })
            .collect();
        writeln!(out, "residual degrees: {}", degrees.join("  "))?;
        if let Some(s) = self.scheme {
            writeln!(out, "weight: {} (target {} per move)", state_weight(state, s)?, s.target())?;
        }
        let legal: Vec<String> = state.legal_moves().into_iter().map(|v| v.to_string()).collect();
        writeln!(out, "legal moves: {}", legal.join(" "))?;
        Ok(())
    }

    fn hint<W: Write>(&self, state: &GameState<'_>, out: &mut W) -> Result<(), CliError> {
        let Some(solver) = self.solver else {
            writeln!(out, "no hints: the exact solver is unavailable for this instance")?;
            return Ok(());
        };
        let values = solver.move_values(state)?;
        let shown: Vec<String> = values.iter().map(|(v, len)| format!("{v}->{len}")).collect();
        writeln!(out, "game length after each move with optimal play: {}", shown.join("  "))?;
        Ok(())
    }

    fn prompt<R: BufRead, W: Write>(
        &self,
        state: &GameState<'_>,
        input: &mut R,
        out: &mut W,
    ) -> Result<Input, CliError> {
        let mut line = String::new();
        loop {
            write!(out, "{}> ", state.to_move())?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(Input::Quit);
            }
            let token = line.trim();
            match token {
                "" => continue,
                "q" | "quit" | "exit" => return Ok(Input::Quit),
                "help" | "?" => writeln!(out, "{HELP}")?,
                "hint" => self.hint(state, out)?,
                _ => match self.lookup(token) {
                    None => writeln!(out, "invalid: expected a vertex index, got {token:?}")?,
                    Some(v) if v >= state.hypergraph().n() => {
                        writeln!(out, "illegal: no vertex {v} (n = {})", state.hypergraph().n())?
                    }
                    Some(v) if !state.is_legal(v) => writeln!(out, "illegal: hits no uncovered edge")?,
                    Some(v) => return Ok(Input::Vertex(v)),
                },
            }
        }
    }

    /// Runs one game. Engine errors end the session with an error; running
    /// out of input ends it with [`Outcome::Aborted`].
    pub fn run<R: BufRead, W: Write>(
        &self,
        engine: &mut dyn Strategy,
        mut input: R,
        mut out: W,
    ) -> Result<Outcome, CliError> {
        let mut state = GameState::new(self.hypergraph, self.first);
        let mut ledger = match self.scheme {
            Some(s) => Some(MoveLedger::new(s.name(), state_weight(&state, s)?)),
            None => None,
        };
        let mut rules = Vec::new();
        writeln!(
            out,
            "you are the {}; {} plays the {}; {} moves first. {HELP}",
            self.human,
            engine.name(),
            self.human.other(),
            self.first
        )?;
        while !state.is_terminal() {
            self.show(&state, &mut out)?;
            let mover = state.to_move();
            let decision = if mover == self.human {
                match self.prompt(&state, &mut input, &mut out)? {
                    Input::Vertex(v) => Decision::plain(v),
                    Input::Quit => {
                        writeln!(out, "aborted after {} move(s)", state.moves_played())?;
                        return Ok(Outcome::Aborted(self.transcript(&state, ledger, rules)));
                    }
                }
            } else {
                engine.decide(&state)?
            };
            let before = self.scheme.map(|s| state_weight(&state, s)).transpose()?;
            let mv = state.play(decision.vertex)?;
            let covered: Vec<String> = mv.newly_covered.iter().map(|e| format!("e{e}")).collect();
            write!(out, "{mover} plays {} covering {}", self.label(mv.vertex), covered.join(" "))?;
            if let (Some(s), Some(before), Some(l)) = (self.scheme, before, ledger.as_mut()) {
                let dec = before - state_weight(&state, s)?;
                l.record(dec);
                write!(out, ", weight -{dec}")?;
            }
            match decision.rule {
                Some(rule) if mover != self.human => writeln!(out, " [{rule}]")?,
                _ => writeln!(out)?,
            }
            rules.push(decision.rule);
        }
        let t = self.transcript(&state, ledger, rules);
        self.summary(&t, &mut out)?;
        Ok(Outcome::Finished(t))
    }

    fn transcript(
        &self,
        state: &GameState<'_>,
        ledger: Option<MoveLedger>,
        rules: Vec<Option<&'static str>>,
    ) -> Transcript {
        let mut t = Transcript::from_state(state);
        if let Some(l) = &ledger {
            for (mv, dec) in t.moves.iter_mut().zip(&l.decreases) {
                mv.weight_decrease = Some(*dec);
            }
        }
        for (mv, rule) in t.moves.iter_mut().zip(rules) {
            mv.rule = rule.map(str::to_string);
        }
        t.ledger = ledger;
        t
    }

    fn summary<W: Write>(&self, t: &Transcript, out: &mut W) -> Result<(), CliError> {
        writeln!(out, "game over after {} move(s)", t.length)?;
        let Some(solver) = self.solver else {
            return Ok(());
        };
        let (name, value) = match self.first {
            PlayerRole::EdgeHitter => ("tau_g", solver.tau_g()?),
            PlayerRole::Staller => ("tau_g'", solver.tau_g_prime()?),
        };
        let verdict = match (t.length as u32).cmp(&value) {
            std::cmp::Ordering::Equal => "matches optimal play".to_string(),
            std::cmp::Ordering::Less => format!("is {} below optimal play", value - t.length as u32),
            std::cmp::Ordering::Greater => format!("is {} above optimal play", t.length as u32 - value),
        };
        writeln!(out, "optimal value {name} = {value}; achieved length {} {verdict}", t.length)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use tgame_core::constructions::{family_hk, figure2};
    use tgame_core::strategies::ExactStrategy;
    use tgame_core::SolveLimits;

    fn run(h: &Hypergraph, human: PlayerRole, script: &str) -> (Outcome, String) {
        let solver = Arc::new(Solver::new(h, SolveLimits::default()).unwrap());
        let session = Session {
            hypergraph: h,
            names: None,
            human,
            first: PlayerRole::EdgeHitter,
            scheme: h.uniformity().and_then(Scheme::for_uniformity),
            solver: Some(&solver),
        };
        let mut engine = ExactStrategy::new(solver.clone());
        let mut out = Vec::new();
        let outcome = session.run(&mut engine, script.as_bytes(), &mut out).unwrap();
        (outcome, String::from_utf8(out).unwrap())
    }

    #[test]
    fn illegal_vertex_is_rejected_and_reprompted() {
        // H1: vertex 0 covers {x-edge, x1y1}; replaying it is illegal.
        let h = family_hk(1).unwrap().hypergraph;
        let (outcome, text) = run(&h, PlayerRole::EdgeHitter, "0\n0\nbogus\n9\n");
        assert!(text.contains("illegal: hits no uncovered edge"), "{text}");
        assert!(text.contains("invalid: expected a vertex index"));
        assert!(text.contains("illegal: no vertex 9"));
        let Outcome::Aborted(t) = outcome else { panic!("expected abort") };
        assert!(!t.complete);
        assert!(t.length >= 1);
    }

    #[test]
    fn staller_against_exact_on_figure2_lasts_three() {
        let h = figure2().unwrap();
        // Staller answers with the lowest legal vertex every time.
        let script = "0\n".to_string() + &(0..h.n()).map(|v| format!("{v}\n")).collect::<String>();
        let (outcome, text) = run(&h, PlayerRole::Staller, &script);
        let Outcome::Finished(t) = outcome else { panic!("{text}") };
        assert!(t.length <= 3);
        assert!(text.contains("optimal value tau_g = 3"));
        assert!(text.contains("weight:"));
        let ledger = t.ledger.unwrap();
        assert_eq!(ledger.total(), ledger.initial_weight);
    }

    #[test]
    fn optimal_edge_hitter_on_h1_takes_four() {
        let h = family_hk(1).unwrap().hypergraph;
        let solver = Solver::new(&h, SolveLimits::default()).unwrap();
        // Replay the exact engine's own choices as the human's input.
        let mut script = String::new();
        let mut state = GameState::new(&h, PlayerRole::EdgeHitter);
        let mut staller = ExactStrategy::new(Arc::new(Solver::new(&h, SolveLimits::default()).unwrap()));
        while !state.is_terminal() {
            let v = match state.to_move() {
                PlayerRole::EdgeHitter => {
                    let v = solver.best_move(&state).unwrap();
                    script.push_str(&format!("{v}\n"));
                    v
                }
                PlayerRole::Staller => staller.choose(&state).unwrap(),
            };
            state.play(v).unwrap();
        }
        let (outcome, text) = run(&h, PlayerRole::EdgeHitter, &script);
        let Outcome::Finished(t) = outcome else { panic!("{text}") };
        assert_eq!(t.length, 4);
        assert!(text.contains("achieved length 4 matches optimal play"));
    }
}
