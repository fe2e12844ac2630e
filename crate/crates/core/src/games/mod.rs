//! Networks, the atomic game family, bounded solvers and scripted strategies.

pub mod ef;
pub mod fill;
pub mod history;
pub mod lyndon;
pub mod netgame;
pub mod network;
pub mod script;
pub mod solver;
pub mod spec;
pub mod transcript;

pub use fill::{realizing_tuple, Filler};
pub use netgame::{NetGame, NetMode, NetMove, NetPos};
pub use network::{Network, NetworkViolation};
pub use solver::{
    least_forall_rounds, replay, solve_rounds, solve_safety, BoundedGame, Budget, Certificate,
    Minimax, SolveResult, Stats, Winner,
};
pub use script::{verify_script, ConeScript, ConeState, Script, ScriptOutcome};
pub use transcript::{network_to_text, parse_network, Step, Transcript};
pub use history::{HistMove, HistPos, HistoryGame, HistoryKind, Hypernetwork};
pub use ef::{EfGame, EfMove, EfPos, FiniteStructure};
pub use lyndon::{check_lyndon_up_to, LyndonRow, LyndonTable};
pub use spec::{solve_game, GameVariant, SolveReport};
