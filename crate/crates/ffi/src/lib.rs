//! C ABI over `hanabi-evo`.
//!
//! Games and agents are opaque handles created by `*_new` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`HanabiStatus`]; on failure [`hanabi_last_error`] describes the problem
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hanabi_evo::agents::{parse_agent, AgentPolicy, CompiledAgent, PresetName};
use hanabi_evo::eval::{evaluate, EvalConfig, EvalMode};
use hanabi_evo::rng::{rng_for, GameRng, DECISION_STREAM};
use hanabi_evo::{Action, Color, GameState, HanabiError, Hint};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HanabiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IllegalAction = 3,
    ParseError = 4,
    IoError = 5,
    GameOver = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HanabiActionKind {
    Play = 0,
    Discard = 1,
    TellColor = 2,
    TellValue = 3,
}

/// `slot` is used by plays and discards; `target` and `value` by tells.
/// Colors are numbered B=0, R=1, Y=2, W=3, G=4; values run 1..=5.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HanabiAction {
    pub kind: HanabiActionKind,
    pub slot: u32,
    pub target: u32,
    pub value: u32,
}

impl HanabiAction {
    fn from_action(a: Action) -> HanabiAction {
        let mut out = HanabiAction {
            kind: HanabiActionKind::Play,
            slot: 0,
            target: 0,
            value: 0,
        };
        match a {
            Action::Play(s) => out.slot = s as u32,
            Action::Discard(s) => {
                out.kind = HanabiActionKind::Discard;
                out.slot = s as u32;
            }
            Action::Tell { target, hint } => {
                out.target = target as u32;
                match hint {
                    Hint::Color(c) => {
                        out.kind = HanabiActionKind::TellColor;
                        out.value = c.index() as u32;
                    }
                    Hint::Value(v) => {
                        out.kind = HanabiActionKind::TellValue;
                        out.value = v as u32;
                    }
                }
            }
        }
        out
    }

    fn to_action(self) -> Result<Action, HanabiError> {
        Ok(match self.kind {
            HanabiActionKind::Play => Action::Play(self.slot as usize),
            HanabiActionKind::Discard => Action::Discard(self.slot as usize),
            HanabiActionKind::TellColor => {
                let color = *Color::ALL
                    .get(self.value as usize)
                    .ok_or_else(|| HanabiError::InvalidInput(format!("color index {} out of range", self.value)))?;
                Action::tell_color(self.target as usize, color)
            }
            HanabiActionKind::TellValue => {
                if !(1..=5).contains(&self.value) {
                    return Err(HanabiError::InvalidInput(format!("value {} out of range", self.value)));
                }
                Action::tell_value(self.target as usize, self.value as u8)
            }
        })
    }
}

/// A game plus the random stream its agents draw decisions from.
pub struct HanabiGame {
    state: GameState,
    rng: GameRng,
}

pub struct HanabiAgent {
    policy: AgentPolicy,
    // indexed by player count
    compiled: [Option<CompiledAgent>; 6],
}

impl HanabiAgent {
    fn new(policy: AgentPolicy) -> HanabiAgent {
        HanabiAgent {
            policy,
            compiled: Default::default(),
        }
    }

    fn compiled(&mut self, players: usize) -> &CompiledAgent {
        let policy = &self.policy;
        self.compiled[players].get_or_insert_with(|| policy.compile(players))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &HanabiError) -> HanabiStatus {
    match e {
        HanabiError::InvalidInput(_) | HanabiError::Config { .. } | HanabiError::UnknownRule(_) => {
            HanabiStatus::InvalidArgument
        }
        HanabiError::IllegalAction { .. } => HanabiStatus::IllegalAction,
        HanabiError::Parse(_) => HanabiStatus::ParseError,
        HanabiError::Io { .. } => HanabiStatus::IoError,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (HanabiStatus, String)>) -> HanabiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HanabiStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HanabiStatus::Panic
        }
    }
}

fn fail(e: HanabiError) -> (HanabiStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HanabiStatus, String) {
    (HanabiStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HanabiStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HanabiStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hanabi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Deals a new game.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_new(players: u32, seed: u64, out: *mut *mut HanabiGame) -> HanabiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let state = GameState::new(players as usize, seed).map_err(fail)?;
        let game = Box::new(HanabiGame {
            state,
            rng: rng_for(seed, DECISION_STREAM),
        });
        *out = Box::into_raw(game);
        Ok(())
    })
}

/// # Safety
/// `game` must come from [`hanabi_game_new`] and not be freed yet; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_free(game: *mut HanabiGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

unsafe fn game_ref<'a>(game: *const HanabiGame) -> Result<&'a HanabiGame, (HanabiStatus, String)> {
    game.as_ref().ok_or_else(|| null("game"))
}

unsafe fn game_mut<'a>(game: *mut HanabiGame) -> Result<&'a mut HanabiGame, (HanabiStatus, String)> {
    game.as_mut().ok_or_else(|| null("game"))
}

/// Applies an action for the current player.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_apply(game: *mut HanabiGame, action: HanabiAction) -> HanabiStatus {
    guard(|| {
        let g = game_mut(game)?;
        if g.state.is_terminal() {
            return Err((HanabiStatus::GameOver, "game is over".into()));
        }
        let action = action.to_action().map_err(fail)?;
        g.state.apply(action).map_err(fail)?;
        Ok(())
    })
}

/// Parses and applies an action written like `play 0`, `discard 3`,
/// `tell 1 R` or `tell 1 3`.
///
/// # Safety
/// `game` must be a live handle and `text` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_apply_text(game: *mut HanabiGame, text: *const c_char) -> HanabiStatus {
    guard(|| {
        let g = game_mut(game)?;
        let text = str_arg(text, "text")?;
        let action: Action = text.parse().map_err(fail)?;
        if g.state.is_terminal() {
            return Err((HanabiStatus::GameOver, "game is over".into()));
        }
        g.state.apply(action).map_err(fail)?;
        Ok(())
    })
}

/// Current score, or -1 for a null handle.
///
/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_score(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.score() as i32)
}

/// 1 if the game is over, 0 if not, -1 for a null handle.
///
/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_is_terminal(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.is_terminal() as i32)
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_current_player(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.current_player() as i32)
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_hint_tokens(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.hint_tokens() as i32)
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_lives(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.lives() as i32)
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_deck_len(game: *const HanabiGame) -> i32 {
    game.as_ref().map_or(-1, |g| g.state.deck_len() as i32)
}

/// Event history in the line format of the CLI. Free with [`hanabi_string_free`].
///
/// # Safety
/// `game` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hanabi_game_history(game: *const HanabiGame, out: *mut *mut c_char) -> HanabiStatus {
    guard(|| {
        let g = game_ref(game)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CString::new(g.state.export_history()).expect("history has no nul bytes");
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed yet; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hanabi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads an agent from the text of an agent file.
///
/// # Safety
/// `text` must be nul-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hanabi_agent_from_toml(text: *const c_char, out: *mut *mut HanabiAgent) -> HanabiStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let policy = parse_agent(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(HanabiAgent::new(policy)));
        Ok(())
    })
}

/// One of the bundled baseline agents, by name (case-insensitive).
///
/// # Safety
/// `name` must be nul-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hanabi_agent_preset(name: *const c_char, out: *mut *mut HanabiAgent) -> HanabiStatus {
    guard(|| {
        let name: PresetName = str_arg(name, "name")?.parse().map_err(fail)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(HanabiAgent::new(AgentPolicy::preset(name))));
        Ok(())
    })
}

/// # Safety
/// `agent` must come from this library and not be freed yet; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hanabi_agent_free(agent: *mut HanabiAgent) {
    if !agent.is_null() {
        drop(Box::from_raw(agent));
    }
}

/// Chooses an action for the current player of `game` without applying it.
/// Random choices draw from the game's own stream.
///
/// # Safety
/// `agent` and `game` must be live handles, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hanabi_agent_act(
    agent: *mut HanabiAgent,
    game: *mut HanabiGame,
    out: *mut HanabiAction,
) -> HanabiStatus {
    guard(|| {
        let agent = agent.as_mut().ok_or_else(|| null("agent"))?;
        let g = game_mut(game)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if g.state.is_terminal() {
            return Err((HanabiStatus::GameOver, "game is over".into()));
        }
        let player = g.state.current_player();
        let action = agent.compiled(g.state.num_players()).act(&g.state, player, &mut g.rng);
        *out = HanabiAction::from_action(action);
        Ok(())
    })
}

/// Mirror (`mixed = 0`) or mixed (`mixed = 1`) evaluation over the given
/// game sizes, `n` games per size and pairing.
///
/// # Safety
/// `agent` must be a live handle, `sizes` must point to `num_sizes`
/// integers, and `out_mean`, `out_sem` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hanabi_agent_evaluate(
    agent: *const HanabiAgent,
    mixed: i32,
    sizes: *const u32,
    num_sizes: usize,
    n: u32,
    seed: u64,
    out_mean: *mut f64,
    out_sem: *mut f64,
) -> HanabiStatus {
    guard(|| {
        let agent = agent.as_ref().ok_or_else(|| null("agent"))?;
        if sizes.is_null() && num_sizes > 0 {
            return Err(null("sizes"));
        }
        if out_mean.is_null() || out_sem.is_null() {
            return Err(null("out_mean/out_sem"));
        }
        let sizes: Vec<usize> = if num_sizes == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(sizes, num_sizes)
                .iter()
                .map(|&s| s as usize)
                .collect()
        };
        let mode = if mixed != 0 { EvalMode::Mixed } else { EvalMode::Mirror };
        let cfg = EvalConfig::with_mode(mode, &sizes, n as usize, seed);
        let report = evaluate(&agent.policy, &cfg).map_err(fail)?;
        *out_mean = report.mean;
        *out_sem = report.sem;
        Ok(())
    })
}
