//! Edit scripts over named lists.
//!
//! Commands are separated by newlines or `;`, and `#` starts a comment.
//! Positions are 1-based and refer to the list as left by the previous
//! command. `set`, `insert` and `delete` act on `main` unless a list name
//! comes first.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use banana::oracle::{matches_rebuild, rebuild_mismatch};
use banana::{EditOutcome, ListId, Workspace};
use serde_json::{json, Value};

use crate::error::CliError;

pub const MAIN: &str = "main";

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Set {
        list: String,
        pos: usize,
        value: f64,
    },
    /// The new item ends up at `pos`.
    Insert {
        list: String,
        pos: usize,
        value: f64,
    },
    Delete {
        list: String,
        pos: usize,
    },
    /// Cuts after `pos`.
    Cut {
        list: String,
        pos: usize,
        left: String,
        right: String,
    },
    Glue {
        left: String,
        right: String,
        into: String,
    },
    Emit {
        list: String,
    },
}

#[derive(Clone, Debug)]
pub struct Line {
    pub line: usize,
    pub text: String,
    pub cmd: Command,
}

pub fn parse(path: &Path, text: &str) -> Result<Vec<Line>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        for part in body.split(';') {
            let toks: Vec<&str> = part.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let cmd =
                parse_command(&toks).map_err(|msg| CliError::Parse { path: path.to_owned(), line: i + 1, msg })?;
            out.push(Line { line: i + 1, text: toks.join(" "), cmd });
        }
    }
    Ok(out)
}

fn parse_command(t: &[&str]) -> Result<Command, String> {
    let pos = |s: &str| s.parse::<usize>().map_err(|_| format!("bad position {s:?}"));
    let val = |s: &str| match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("bad value {s:?}")),
    };
    let name = |s: &str| s.to_string();
    let main = || MAIN.to_string();
    Ok(match t {
        ["set", p, v] => Command::Set { list: main(), pos: pos(p)?, value: val(v)? },
        ["set", l, p, v] => Command::Set { list: name(l), pos: pos(p)?, value: val(v)? },
        ["insert", p, v] => Command::Insert { list: main(), pos: pos(p)?, value: val(v)? },
        ["insert", l, p, v] => Command::Insert { list: name(l), pos: pos(p)?, value: val(v)? },
        ["delete", p] => Command::Delete { list: main(), pos: pos(p)? },
        ["delete", l, p] => Command::Delete { list: name(l), pos: pos(p)? },
        ["cut", l, p, a, b] => Command::Cut { list: name(l), pos: pos(p)?, left: name(a), right: name(b) },
        ["glue", a, b, c] => Command::Glue { left: name(a), right: name(b), into: name(c) },
        ["emit", l] => Command::Emit { list: name(l) },
        [op, ..] => return Err(format!("invalid command {op:?} with {} argument(s)", t.len() - 1)),
        [] => unreachable!("empty commands are skipped"),
    })
}

/// Options that shape the replay output.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReplayOptions {
    pub debug_validate: bool,
    pub include_hook_points: bool,
}

pub struct Replay<'a> {
    ws: Workspace,
    names: BTreeMap<String, ListId>,
    script: &'a Path,
    opts: ReplayOptions,
    log: Vec<Value>,
    emitted: Vec<Value>,
}

impl<'a> Replay<'a> {
    pub fn new(values: &[f64], script: &'a Path, opts: ReplayOptions) -> Result<Self, CliError> {
        let mut ws = Workspace::new();
        let main = ws.build(values).map_err(|e| CliError::command(script, 0, e))?;
        let names = BTreeMap::from([(MAIN.to_string(), main)]);
        Ok(Replay { ws, names, script, opts, log: Vec::new(), emitted: Vec::new() })
    }

    fn err(&self, line: usize, msg: String) -> CliError {
        CliError::Parse { path: PathBuf::from(self.script), line, msg }
    }

    fn list(&self, line: usize, name: &str) -> Result<ListId, CliError> {
        self.names.get(name).copied().ok_or_else(|| self.err(line, format!("no list named {name:?}")))
    }

    fn take(&mut self, line: usize, name: &str) -> Result<ListId, CliError> {
        self.names.remove(name).ok_or_else(|| self.err(line, format!("no list named {name:?}")))
    }

    /// Checks before mutating that `new` names are distinct and unused,
    /// counting the names in `released` as unused.
    fn free(&self, line: usize, new: &[&String], released: &[&String]) -> Result<(), CliError> {
        for (i, n) in new.iter().enumerate() {
            if new[..i].contains(n) || (self.names.contains_key(n.as_str()) && !released.contains(n)) {
                return Err(self.err(line, format!("list name {n:?} is already in use")));
            }
        }
        Ok(())
    }

    fn bind(&mut self, line: usize, name: &str, l: ListId) -> Result<(), CliError> {
        if self.names.insert(name.to_string(), l).is_some() {
            return Err(self.err(line, format!("list name {name:?} is already in use")));
        }
        Ok(())
    }

    fn diagram(&self, l: ListId) -> Value {
        self.ws.diagram_with(l, self.opts.include_hook_points).to_json(json!({ "items": self.ws.len(l) }))
    }

    pub fn run(&mut self, lines: &[Line]) -> Result<(), CliError> {
        for Line { line, text, cmd } in lines {
            let (line, script) = (*line, self.script);
            let fail = |e| CliError::command(script, line, e);
            let (out, touched) = match cmd {
                Command::Emit { list } => {
                    let l = self.list(line, list)?;
                    self.emitted.push(json!({ "line": line, "name": list, "diagram": self.diagram(l) }));
                    continue;
                }
                Command::Set { list, pos, value } => {
                    let l = self.list(line, list)?;
                    let item = self.ws.item_at(l, *pos).map_err(fail)?;
                    (self.ws.change_value(item, *value).map_err(fail)?, vec![l])
                }
                Command::Insert { list, pos, value } => {
                    let l = self.list(line, list)?;
                    let after = pos.checked_sub(1).ok_or_else(|| self.err(line, "positions start at 1".into()))?;
                    (self.ws.insert_item(l, after, *value).map_err(fail)?.1, vec![l])
                }
                Command::Delete { list, pos } => {
                    let l = self.list(line, list)?;
                    let item = self.ws.item_at(l, *pos).map_err(fail)?;
                    (self.ws.delete_item(item).map_err(fail)?, vec![l])
                }
                Command::Cut { list, pos, left, right } => {
                    let l = self.list(line, list)?;
                    self.free(line, &[left, right], &[list])?;
                    let (g, h, out) = self.ws.cut(l, *pos).map_err(fail)?;
                    self.take(line, list)?;
                    self.bind(line, left, g)?;
                    self.bind(line, right, h)?;
                    (out, vec![g, h])
                }
                Command::Glue { left, right, into } => {
                    let (g, h) = (self.list(line, left)?, self.list(line, right)?);
                    self.free(line, &[into], &[left, right])?;
                    let (f, out) = self.ws.concatenate(g, h).map_err(fail)?;
                    self.take(line, left)?;
                    self.take(line, right)?;
                    self.bind(line, into, f)?;
                    (out, vec![f])
                }
            };
            self.log.push(record(line, text, &out));
            if self.opts.debug_validate {
                for l in touched {
                    self.check(line, text, l)?;
                }
            }
        }
        Ok(())
    }

    fn check(&self, line: usize, text: &str, l: ListId) -> Result<(), CliError> {
        let mut report: Vec<String> = self.ws.validate(l).iter().map(|v| v.to_string()).collect();
        if report.is_empty() && !matches_rebuild(&self.ws, l) {
            report.push(format!("differs from rebuild: {}", rebuild_mismatch(&self.ws, l).unwrap_or_default()));
        }
        if report.is_empty() {
            return Ok(());
        }
        Err(CliError::Invariant { after: format!("line {line} `{text}`"), report: report.join("\n") })
    }

    pub fn document(&self) -> Value {
        let finals: serde_json::Map<String, Value> =
            self.names.iter().map(|(n, &l)| (n.clone(), self.diagram(l))).collect();
        json!({ "emitted": self.emitted, "final": finals, "log": self.log })
    }
}

fn record(line: usize, text: &str, out: &EditOutcome) -> Value {
    json!({ "line": line, "command": text, "k": out.k, "kprime": out.kprime, "counters": out.counters })
}
