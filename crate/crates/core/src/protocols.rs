//! Proportional cake-cutting protocols and fairness checks.
//!
//! Every protocol cuts prefixes `remaining ∩ [0,c]`, so all intermediate
//! pieces stay finite unions of intervals. Ties are broken toward the lowest
//! player id, and a chooser indifferent between two pieces takes the left one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::interval::IntervalSet;
use crate::rational::{format_rational, int, Rational};
use crate::valuation::{CdfValue, Valuation, ValuationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error("need at least {needed} players, got {got}")]
    TooFewPlayers { needed: usize, got: usize },
    #[error("player ids must be 0..n in order")]
    BadPlayerIds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    pub id: usize,
    pub valuation: Valuation,
}

impl Player {
    pub fn new(id: usize, valuation: Valuation) -> Self {
        Player { id, valuation }
    }
}

/// Builds players with ids `0..n` from a list of valuations.
pub fn players_from(valuations: impl IntoIterator<Item = Valuation>) -> Vec<Player> {
    valuations
        .into_iter()
        .enumerate()
        .map(|(id, v)| Player::new(id, v))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// `player` cut the remaining cake at `point`.
    Cut { player: usize, point: Rational },
    /// `player` took the `side` piece of the last cut.
    Choose { player: usize, side: Side },
    /// `player` trimmed the piece on the table back to `point`.
    Diminish { player: usize, point: Rational },
    /// `player` declined to trim the piece on the table.
    Pass { player: usize },
    /// `player` would call stop at `point` in a moving-knife round.
    Claim { player: usize, point: Rational },
    /// `player` left with `piece`.
    Exit { player: usize, piece: IntervalSet },
}

impl TraceEvent {
    pub fn to_json(&self) -> Value {
        match self {
            TraceEvent::Cut { player, point } => {
                json!({"event": "cut", "player": player, "point": format_rational(point)})
            }
            TraceEvent::Choose { player, side } => json!({
                "event": "choose",
                "player": player,
                "side": match side { Side::Left => "left", Side::Right => "right" },
            }),
            TraceEvent::Diminish { player, point } => {
                json!({"event": "diminish", "player": player, "point": format_rational(point)})
            }
            TraceEvent::Pass { player } => json!({"event": "pass", "player": player}),
            TraceEvent::Claim { player, point } => {
                json!({"event": "claim", "player": player, "point": format_rational(point)})
            }
            TraceEvent::Exit { player, piece } => {
                json!({"event": "exit", "player": player, "piece": piece.to_string()})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub protocol: String,
    pub pieces: BTreeMap<usize, IntervalSet>,
    pub trace: Vec<TraceEvent>,
}

impl Allocation {
    pub fn new(protocol: &str) -> Self {
        Allocation {
            protocol: protocol.to_string(),
            pieces: BTreeMap::new(),
            trace: Vec::new(),
        }
    }

    fn give(&mut self, player: usize, piece: IntervalSet) {
        self.trace.push(TraceEvent::Exit {
            player,
            piece: piece.clone(),
        });
        self.pieces.insert(player, piece);
    }

    /// Pieces are pairwise disjoint and together make up `[0,1]`.
    pub fn is_partition(&self) -> bool {
        let mut covered = IntervalSet::empty();
        for piece in self.pieces.values() {
            if !covered.is_disjoint(piece) {
                return false;
            }
            covered = covered.union(piece);
        }
        covered == IntervalSet::unit()
    }

    pub fn piece(&self, player: usize) -> &IntervalSet {
        static EMPTY: IntervalSet = IntervalSet::empty();
        self.pieces.get(&player).unwrap_or(&EMPTY)
    }

    /// Machine-readable report with the full value matrix and both verdicts.
    pub fn report(&self, players: &[Player], tol: &Rational) -> Value {
        let prop = check_proportional(self, players, tol);
        let envy = check_envy_free(self, players, tol);
        let pieces: serde_json::Map<String, Value> = self
            .pieces
            .iter()
            .map(|(id, s)| (id.to_string(), Value::String(s.to_string())))
            .collect();
        let values: Vec<Vec<String>> = envy
            .values
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        json!({
            "protocol": self.protocol,
            "pieces": pieces,
            "values": values,
            "proportional": prop.passed,
            "envy_free": envy.passed,
            "trace": self.trace.iter().map(TraceEvent::to_json).collect::<Vec<_>>(),
        })
    }
}

fn check_players(players: &[Player], needed: usize) -> Result<(), ProtocolError> {
    if players.len() < needed {
        return Err(ProtocolError::TooFewPlayers {
            needed,
            got: players.len(),
        });
    }
    if players.iter().enumerate().any(|(i, p)| p.id != i) {
        return Err(ProtocolError::BadPlayerIds);
    }
    players.iter().try_for_each(|p| reject_atoms(&p.valuation))
}

fn reject_atoms(v: &Valuation) -> Result<(), ProtocolError> {
    match v.atoms().into_iter().next() {
        Some((at, weight)) => Err(ValuationError::AtomObstruction {
            at: format_rational(&at),
            weight: format_rational(&weight),
        }
        .into()),
        None => Ok(()),
    }
}

/// Cuts of valuations with a Cantor part are only accurate to `tol`.
fn slack(v: &Valuation, tol: &Rational) -> Rational {
    if v.has_singular_part() {
        tol.clone()
    } else {
        Rational::zero()
    }
}

fn eval_tol(tol: &Rational) -> Rational {
    tol / int(4)
}

/// Cuts `remaining ∩ [0,c]` worth `share` to `player` (capped at the whole of `remaining`).
fn cut_worth(player: &Player, remaining: &IntervalSet, share: &Rational, tol: &Rational) -> Result<crate::valuation::Cut, ValuationError> {
    let whole = player.valuation.evaluate(remaining, &eval_tol(tol))?;
    let mid = whole.midpoint();
    let alpha = if mid.is_zero() || *share >= mid {
        Rational::one()
    } else {
        share / mid
    };
    player.valuation.cut_point(remaining, &alpha, tol)
}

fn cut_and_choose_on(
    cutter: &Player,
    chooser: &Player,
    remaining: &IntervalSet,
    tol: &Rational,
    alloc: &mut Allocation,
) -> Result<(), ProtocolError> {
    let cut = cutter
        .valuation
        .cut_point(remaining, &Rational::new(1.into(), 2.into()), tol)?;
    alloc.trace.push(TraceEvent::Cut {
        player: cutter.id,
        point: cut.point.clone(),
    });
    let left = cut.piece;
    let right = remaining.difference(&left);
    let et = eval_tol(tol);
    let vl = chooser.valuation.evaluate(&left, &et)?;
    let vr = chooser.valuation.evaluate(&right, &et)?;
    let side = if vl.midpoint() >= vr.midpoint() {
        Side::Left
    } else {
        Side::Right
    };
    alloc.trace.push(TraceEvent::Choose {
        player: chooser.id,
        side,
    });
    let (mine, theirs) = match side {
        Side::Left => (left, right),
        Side::Right => (right, left),
    };
    alloc.give(chooser.id, mine);
    alloc.give(cutter.id, theirs);
    Ok(())
}

/// Player 0 halves the cake by its own measure; player 1 picks a half.
pub fn cut_and_choose(p1: &Player, p2: &Player, tol: &Rational) -> Result<Allocation, ProtocolError> {
    reject_atoms(&p1.valuation)?;
    reject_atoms(&p2.valuation)?;
    let mut alloc = Allocation::new("cut-and-choose");
    cut_and_choose_on(p1, p2, &IntervalSet::unit(), tol, &mut alloc)?;
    Ok(alloc)
}

/// Banach–Knaster last diminisher. The first active player cuts a piece worth
/// `1/n`, each later player trims it back to `1/n` if it is worth strictly
/// more to them, and the last to touch it leaves with it. The final two
/// players split the rest by cut and choose.
pub fn last_diminisher(players: &[Player], tol: &Rational) -> Result<Allocation, ProtocolError> {
    check_players(players, 2)?;
    let n = players.len();
    let share = Rational::new(BigInt::one(), BigInt::from(n));
    let mut alloc = Allocation::new("last-diminisher");
    let mut remaining = IntervalSet::unit();
    let mut active: Vec<&Player> = players.iter().collect();
    let et = eval_tol(tol);

    while active.len() > 2 {
        let cutter = active[0];
        let cut = cut_worth(cutter, &remaining, &share, tol)?;
        alloc.trace.push(TraceEvent::Cut {
            player: cutter.id,
            point: cut.point.clone(),
        });
        let mut piece = cut.piece;
        let mut holder = 0;
        for (j, p) in active.iter().enumerate().skip(1) {
            let value = p.valuation.evaluate(&piece, &et)?;
            if *value.lo() > share {
                let trimmed = cut_worth(p, &piece, &share, tol)?;
                alloc.trace.push(TraceEvent::Diminish {
                    player: p.id,
                    point: trimmed.point.clone(),
                });
                piece = trimmed.piece;
                holder = j;
            } else {
                alloc.trace.push(TraceEvent::Pass { player: p.id });
            }
        }
        let winner = active.remove(holder);
        remaining = remaining.difference(&piece);
        alloc.give(winner.id, piece);
    }
    cut_and_choose_on(active[0], active[1], &remaining, tol, &mut alloc)?;
    Ok(alloc)
}

/// Dubins–Spanier moving knife, simulated by events: every active player
/// names the smallest `c` at which `remaining ∩ [0,c]` is worth `1/n` to
/// them, and the smallest claim (lowest id on ties) leaves with that piece.
pub fn moving_knife(players: &[Player], tol: &Rational) -> Result<Allocation, ProtocolError> {
    check_players(players, 2)?;
    let n = players.len();
    let share = Rational::new(BigInt::one(), BigInt::from(n));
    let mut alloc = Allocation::new("moving-knife");
    let mut remaining = IntervalSet::unit();
    let mut active: Vec<&Player> = players.iter().collect();

    while active.len() > 1 {
        let mut best: Option<(usize, crate::valuation::Cut)> = None;
        for (i, p) in active.iter().enumerate() {
            let cut = cut_worth(p, &remaining, &share, tol)?;
            alloc.trace.push(TraceEvent::Claim {
                player: p.id,
                point: cut.point.clone(),
            });
            let better = match &best {
                None => true,
                Some((_, b)) => (&cut.point, cut.closed) < (&b.point, b.closed),
            };
            if better {
                best = Some((i, cut));
            }
        }
        let (i, cut) = best.expect("at least one active player");
        let winner = active.remove(i);
        remaining = remaining.difference(&cut.piece);
        alloc.give(winner.id, cut.piece);
    }
    alloc.give(active[0].id, remaining);
    Ok(alloc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProportionalRow {
    pub player: usize,
    pub value: CdfValue,
    pub share: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProportionalityReport {
    pub rows: Vec<ProportionalRow>,
    pub passed: bool,
}

/// `v_i(piece_i) >= 1/n` for every player; valuations with a Cantor part may fall short by `tol`.
pub fn check_proportional(alloc: &Allocation, players: &[Player], tol: &Rational) -> ProportionalityReport {
    let n = players.len().max(1);
    let share = Rational::new(BigInt::one(), BigInt::from(n));
    let et = eval_tol(tol);
    let rows: Vec<ProportionalRow> = players
        .iter()
        .map(|p| {
            let value = p.valuation.evaluate_unchecked(alloc.piece(p.id), &et);
            let pass = *value.lo() >= &share - slack(&p.valuation, tol);
            ProportionalRow {
                player: p.id,
                value,
                share: share.clone(),
                pass,
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass);
    ProportionalityReport { rows, passed }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyReport {
    /// `values[i][j] = v_i(piece_j)`.
    pub values: Vec<Vec<CdfValue>>,
    /// Pairs `(i, j)` where player `i` prefers player `j`'s piece.
    pub envy: Vec<(usize, usize)>,
    pub passed: bool,
}

/// `v_i(piece_i) >= v_i(piece_j)` for all `i, j`; valuations with a Cantor part get slack `tol`.
pub fn check_envy_free(alloc: &Allocation, players: &[Player], tol: &Rational) -> EnvyReport {
    let et = eval_tol(tol);
    let values: Vec<Vec<CdfValue>> = players
        .iter()
        .map(|p| {
            players
                .iter()
                .map(|q| p.valuation.evaluate_unchecked(alloc.piece(q.id), &et))
                .collect()
        })
        .collect();
    let mut envy = Vec::new();
    for (i, row) in values.iter().enumerate() {
        let own = &row[i];
        let slack = slack(&players[i].valuation, tol);
        for (j, other) in row.iter().enumerate() {
            if *other.lo() > own.hi() + &slack {
                envy.push((i, j));
            }
        }
    }
    let passed = envy.is_empty();
    EnvyReport {
        values,
        envy,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::rational::{pow2_neg, ratio};

    fn tol() -> Rational {
        pow2_neg(40)
    }

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    fn right_heavy() -> Valuation {
        Valuation::from_boxes(&[
            (Interval::closed_open(int(0), ratio(1, 2)).unwrap(), 0),
            (Interval::closed(ratio(1, 2), int(1)).unwrap(), 4),
        ])
        .unwrap()
    }

    #[test]
    fn cut_and_choose_uniform() {
        let ps = players_from([Valuation::uniform(), Valuation::uniform()]);
        let a = cut_and_choose(&ps[0], &ps[1], &tol()).unwrap();
        assert_eq!(a.trace[0], TraceEvent::Cut { player: 0, point: ratio(1, 2) });
        assert_eq!(a.pieces[&1], set("[0,1/2]"));
        assert_eq!(a.pieces[&0], set("(1/2,1]"));
        assert!(a.is_partition());
        assert!(check_proportional(&a, &ps, &tol()).passed);
        assert!(check_envy_free(&a, &ps, &tol()).passed);
    }

    #[test]
    fn chooser_takes_right_when_it_is_worth_more() {
        let ps = players_from([Valuation::uniform(), right_heavy()]);
        let a = cut_and_choose(&ps[0], &ps[1], &tol()).unwrap();
        assert_eq!(a.trace[1], TraceEvent::Choose { player: 1, side: Side::Right });
        assert_eq!(
            ps[1].valuation.evaluate(&a.pieces[&1], &tol()).unwrap(),
            CdfValue::Exact(int(1))
        );
        assert_eq!(
            ps[0].valuation.evaluate(&a.pieces[&0], &tol()).unwrap(),
            CdfValue::Exact(ratio(1, 2))
        );
    }

    #[test]
    fn last_diminisher_three_uniform() {
        let ps = players_from(vec![Valuation::uniform(); 3]);
        let a = last_diminisher(&ps, &tol()).unwrap();
        let mut got: Vec<String> = a.pieces.values().map(|s| s.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["(1/3,2/3]", "(2/3,1]", "[0,1/3]"]);
        assert!(check_proportional(&a, &ps, &tol()).passed);
        let envy = check_envy_free(&a, &ps, &tol());
        assert!(envy.passed);
        assert_eq!(envy.values.len(), 3);
    }

    #[test]
    fn last_diminisher_two_players_is_cut_and_choose() {
        let ps = players_from([Valuation::uniform(), right_heavy()]);
        let a = last_diminisher(&ps, &tol()).unwrap();
        let b = cut_and_choose(&ps[0], &ps[1], &tol()).unwrap();
        assert_eq!(a.pieces, b.pieces);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn diminishing_happens() {
        // player 1 values the left end more and trims player 0's piece
        let left_heavy = Valuation::from_boxes(&[
            (Interval::closed_open(int(0), ratio(1, 2)).unwrap(), 3),
            (Interval::closed(ratio(1, 2), int(1)).unwrap(), 1),
        ])
        .unwrap();
        let ps = players_from([Valuation::uniform(), left_heavy, Valuation::uniform()]);
        let a = last_diminisher(&ps, &tol()).unwrap();
        assert!(a
            .trace
            .iter()
            .any(|e| matches!(e, TraceEvent::Diminish { player: 1, .. })));
        assert!(a.is_partition());
        assert!(check_proportional(&a, &ps, &tol()).passed);
    }

    #[test]
    fn moving_knife_examples() {
        let ps = players_from(vec![Valuation::uniform(); 4]);
        let a = moving_knife(&ps, &tol()).unwrap();
        for piece in a.pieces.values() {
            assert_eq!(piece.total_length(), ratio(1, 4));
        }
        assert_eq!(a.pieces[&0], set("[0,1/4]"));
        assert!(a.is_partition());

        let ps = players_from([right_heavy(), Valuation::uniform()]);
        let a = moving_knife(&ps, &tol()).unwrap();
        assert_eq!(a.pieces[&1], set("[0,1/2]"));
        assert!(check_proportional(&a, &ps, &tol()).passed);
    }

    #[test]
    fn atoms_are_rejected() {
        let ps = players_from([Valuation::uniform(), Valuation::dirac(ratio(1, 2)).unwrap()]);
        for r in [
            last_diminisher(&ps, &tol()),
            moving_knife(&ps, &tol()),
            cut_and_choose(&ps[1], &ps[0], &tol()),
            cut_and_choose(&ps[0], &ps[1], &tol()),
        ] {
            assert!(matches!(
                r,
                Err(ProtocolError::Valuation(ValuationError::AtomObstruction { .. }))
            ));
        }
    }

    #[test]
    fn player_checks() {
        let one = players_from([Valuation::uniform()]);
        assert_eq!(
            moving_knife(&one, &tol()),
            Err(ProtocolError::TooFewPlayers { needed: 2, got: 1 })
        );
        let bad = vec![Player::new(1, Valuation::uniform()), Player::new(0, Valuation::uniform())];
        assert_eq!(last_diminisher(&bad, &tol()), Err(ProtocolError::BadPlayerIds));
    }

    #[test]
    fn skewed_allocation_fails_checks() {
        let ps = players_from(vec![Valuation::uniform(); 2]);
        let mut a = Allocation::new("manual");
        a.pieces.insert(0, set("[0,9/10]"));
        a.pieces.insert(1, set("(9/10,1]"));
        assert!(a.is_partition());
        let prop = check_proportional(&a, &ps, &tol());
        assert!(!prop.passed);
        assert!(prop.rows[0].pass && !prop.rows[1].pass);
        let envy = check_envy_free(&a, &ps, &tol());
        assert_eq!(envy.envy, vec![(1, 0)]);
    }

    #[test]
    fn report_shape() {
        let ps = players_from(vec![Valuation::uniform(); 2]);
        let a = cut_and_choose(&ps[0], &ps[1], &tol()).unwrap();
        let r = a.report(&ps, &tol());
        assert_eq!(r["protocol"], "cut-and-choose");
        assert_eq!(r["pieces"]["1"], "[0,1/2]");
        assert_eq!(r["values"][0][0], "1/2");
        assert_eq!(r["proportional"], true);
        assert_eq!(r["envy_free"], true);
        assert_eq!(r["trace"][0]["event"], "cut");
    }
}
