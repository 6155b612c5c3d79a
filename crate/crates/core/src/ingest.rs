//! Point-by-point match CSV ingestion and validation.
//!
//! The default column names follow the public Grand Slam point-by-point
//! exports (`match_id`, `elapsed_time`, `point_victor`, `p1_ace`,
//! `p1_net_pt_won`, `p1_break_pt`, ...). A [`ColumnSchema`] can remap any
//! canonical field to a differently named source column.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two players of a singles match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// 0 for player 1, 1 for player 2.
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl From<Player> for u8 {
    fn from(p: Player) -> u8 {
        p.number()
    }
}

impl TryFrom<u8> for Player {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Player::One),
            2 => Ok(Player::Two),
            other => Err(format!("player id must be 1 or 2, got {other}")),
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.number())
    }
}

/// Per-player event flags recorded on a point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerFlags {
    pub ace: bool,
    pub double_fault: bool,
    pub winner: bool,
    pub unforced_error: bool,
    pub net_pt: bool,
    pub net_pt_won: bool,
    pub break_pt: bool,
    pub break_pt_won: bool,
    pub break_pt_missed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub match_id: String,
    pub elapsed_seconds: u64,
    pub set_no: u32,
    pub game_no: u32,
    pub point_no: u32,
    pub server: Player,
    pub point_victor: Player,
    pub p1_sets: u32,
    pub p2_sets: u32,
    pub p1_games: u32,
    pub p2_games: u32,
    /// Game score tokens as they appear in the source ("0", "15", "30", "40", "AD", tiebreak counts).
    pub p1_score: String,
    pub p2_score: String,
    pub p1: PlayerFlags,
    pub p2: PlayerFlags,
}

impl PointRecord {
    pub fn flags(&self, player: Player) -> &PlayerFlags {
        match player {
            Player::One => &self.p1,
            Player::Two => &self.p2,
        }
    }

    /// True when either player holds a break point on this point.
    pub fn is_break_point(&self) -> bool {
        self.p1.break_pt || self.p2.break_pt
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchPointLog {
    pub match_id: String,
    pub player1_name: String,
    pub player2_name: String,
    pub points: Vec<PointRecord>,
}

impl MatchPointLog {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Winner of a completed match: whoever won its final point.
    pub fn match_winner(&self) -> Option<Player> {
        self.points.last().map(|p| p.point_victor)
    }

    /// Same match with the two players' roles exchanged.
    pub fn swap_players(&self) -> MatchPointLog {
        let points = self
            .points
            .iter()
            .map(|p| PointRecord {
                server: p.server.other(),
                point_victor: p.point_victor.other(),
                p1_sets: p.p2_sets,
                p2_sets: p.p1_sets,
                p1_games: p.p2_games,
                p2_games: p.p1_games,
                p1_score: p.p2_score.clone(),
                p2_score: p.p1_score.clone(),
                p1: p.p2,
                p2: p.p1,
                ..p.clone()
            })
            .collect();
        MatchPointLog {
            match_id: self.match_id.clone(),
            player1_name: self.player2_name.clone(),
            player2_name: self.player1_name.clone(),
            points,
        }
    }
}

/// A single finding: row index within the log (or data row within a file),
/// a stable rule identifier and a human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub row: usize,
    pub rule: String,
    pub message: String,
}

impl Issue {
    fn new(row: usize, rule: &str, message: impl Into<String>) -> Self {
        Issue { row, rule: rule.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub record_count: usize,
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }
}

const FLAG_SUFFIXES: [&str; 9] = [
    "ace",
    "double_fault",
    "winner",
    "unf_err",
    "net_pt",
    "net_pt_won",
    "break_pt",
    "break_pt_won",
    "break_pt_missed",
];

const MANDATORY: [&str; 4] = ["match_id", "point_no", "server", "point_victor"];

const SCALAR_FIELDS: [&str; 15] = [
    "match_id",
    "player1",
    "player2",
    "elapsed_time",
    "set_no",
    "game_no",
    "point_no",
    "p1_sets",
    "p2_sets",
    "p1_games",
    "p2_games",
    "p1_score",
    "p2_score",
    "server",
    "point_victor",
];

/// All canonical field names in export order.
pub fn canonical_fields() -> Vec<String> {
    let mut fields: Vec<String> = SCALAR_FIELDS.iter().map(|s| s.to_string()).collect();
    for suffix in FLAG_SUFFIXES {
        fields.push(format!("p1_{suffix}"));
        fields.push(format!("p2_{suffix}"));
    }
    fields
}

/// Mapping from canonical field name to the column name used in a source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSchema {
    columns: HashMap<String, String>,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        let columns = canonical_fields().into_iter().map(|f| (f.clone(), f)).collect();
        ColumnSchema { columns }
    }
}

impl ColumnSchema {
    /// Parses a key-value schema document (`canonical_field = "source column"`)
    /// layered over the default mapping.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table =
            text.parse().map_err(|e: toml::de::Error| Error::Schema(e.to_string()))?;
        let mut schema = ColumnSchema::default();
        for (key, value) in table {
            if !schema.columns.contains_key(&key) {
                return Err(Error::Schema(format!("unknown canonical field `{key}` in schema file")));
            }
            let column = value
                .as_str()
                .ok_or_else(|| Error::Schema(format!("schema value for `{key}` must be a string")))?;
            schema.columns.insert(key, column.to_string());
        }
        Ok(schema)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn column<'a>(&'a self, field: &'a str) -> &'a str {
        self.columns.get(field).map(String::as_str).unwrap_or(field)
    }
}

/// Result of parsing one CSV source.
#[derive(Debug, Clone, Default)]
pub struct ParsedMatches {
    pub logs: Vec<MatchPointLog>,
    /// Rows dropped because a field could not be parsed (row = 0-based data row).
    pub row_errors: Vec<Issue>,
    /// Missing optional columns and other non-fatal findings.
    pub warnings: Vec<Issue>,
}

/// Parses "H:MM:SS" or "HH:MM:SS" into seconds.
pub fn parse_elapsed(text: &str) -> Option<u64> {
    let mut parts = text.trim().split(':');
    let (h, m, s) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() || m.len() != 2 || s.len() != 2 || h.is_empty() {
        return None;
    }
    let all_digits = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(h) || !all_digits(m) || !all_digits(s) {
        return None;
    }
    let (h, m, s): (u64, u64, u64) = (h.parse().ok()?, m.parse().ok()?, s.parse().ok()?);
    if m >= 60 || s >= 60 {
        return None;
    }
    Some(h * 3600 + m * 60 + s)
}

/// Formats seconds as "H:MM:SS" with unpadded hours.
pub fn format_elapsed(seconds: u64) -> String {
    format!("{}:{:02}:{:02}", seconds / 3600, (seconds / 60) % 60, seconds % 60)
}

fn parse_flag(text: &str) -> Option<bool> {
    match text.trim() {
        "" | "0" | "0.0" => Some(false),
        "1" | "1.0" => Some(true),
        t if t.eq_ignore_ascii_case("true") => Some(true),
        t if t.eq_ignore_ascii_case("false") => Some(false),
        _ => None,
    }
}

struct ColumnIndex {
    index: HashMap<String, usize>,
}

impl ColumnIndex {
    fn get<'r>(&self, field: &str, record: &'r csv::StringRecord) -> Option<&'r str> {
        self.index.get(field).and_then(|&i| record.get(i))
    }
}

/// Parses a point-by-point CSV into one log per distinct `match_id`, in order
/// of first appearance, each ordered by `point_no`.
pub fn parse_match_csv<R: Read>(source: R, schema: &ColumnSchema) -> Result<ParsedMatches> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Schema("input has no header row".into()));
    }

    let mut out = ParsedMatches::default();
    let mut index = HashMap::new();
    for field in canonical_fields() {
        let column = schema.column(&field);
        match headers.iter().position(|h| h.trim() == column) {
            Some(i) => {
                index.insert(field, i);
            }
            None if MANDATORY.contains(&field.as_str()) => {
                return Err(Error::Schema(format!(
                    "missing mandatory column `{column}` (field {field})"
                )));
            }
            None => out.warnings.push(Issue::new(
                0,
                "missing_column",
                format!("optional column `{column}` absent; field {field} defaults"),
            )),
        }
    }
    let columns = ColumnIndex { index };

    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, MatchPointLog> = HashMap::new();

    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        match parse_row(&record, &columns) {
            Ok((point, names)) => {
                let log = groups.entry(point.match_id.clone()).or_insert_with(|| {
                    order.push(point.match_id.clone());
                    MatchPointLog {
                        match_id: point.match_id.clone(),
                        player1_name: names.0.clone(),
                        player2_name: names.1.clone(),
                        points: Vec::new(),
                    }
                });
                log.points.push(point);
            }
            Err((rule, message)) => out.row_errors.push(Issue::new(row, rule, message)),
        }
    }

    out.logs = order
        .into_iter()
        .filter_map(|id| groups.remove(&id))
        .map(|mut log| {
            log.points.sort_by_key(|p| p.point_no);
            log
        })
        .collect();
    Ok(out)
}

pub fn parse_match_file(path: &Path, schema: &ColumnSchema) -> Result<ParsedMatches> {
    parse_match_csv(std::fs::File::open(path)?, schema)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse { line, message: e.to_string() }
}

type RowError = (&'static str, String);

fn parse_row(
    record: &csv::StringRecord,
    columns: &ColumnIndex,
) -> std::result::Result<(PointRecord, (String, String)), RowError> {
    let text = |field: &str| columns.get(field, record).map(str::trim);
    let int = |field: &str, default: u32| -> std::result::Result<u32, RowError> {
        match text(field) {
            None | Some("") => Ok(default),
            Some(t) => t
                .parse::<u32>()
                .or_else(|_| t.parse::<f64>().ok().filter(|v| v.fract() == 0.0 && *v >= 0.0).map(|v| v as u32).ok_or(()))
                .map_err(|_| ("bad_integer", format!("field {field}: `{t}` is not a non-negative integer"))),
        }
    };
    let player = |field: &str| -> std::result::Result<Player, RowError> {
        let t = text(field).unwrap_or("");
        t.parse::<u8>()
            .ok()
            .and_then(|v| Player::try_from(v).ok())
            .ok_or_else(|| ("bad_player", format!("field {field}: `{t}` is not a player id (1 or 2)")))
    };
    let flag = |field: &str| -> std::result::Result<bool, RowError> {
        match text(field) {
            None => Ok(false),
            Some(t) => parse_flag(t).ok_or_else(|| ("bad_flag", format!("field {field}: `{t}` is not a 0/1 flag"))),
        }
    };
    let flags = |prefix: &str| -> std::result::Result<PlayerFlags, RowError> {
        Ok(PlayerFlags {
            ace: flag(&format!("{prefix}_ace"))?,
            double_fault: flag(&format!("{prefix}_double_fault"))?,
            winner: flag(&format!("{prefix}_winner"))?,
            unforced_error: flag(&format!("{prefix}_unf_err"))?,
            net_pt: flag(&format!("{prefix}_net_pt"))?,
            net_pt_won: flag(&format!("{prefix}_net_pt_won"))?,
            break_pt: flag(&format!("{prefix}_break_pt"))?,
            break_pt_won: flag(&format!("{prefix}_break_pt_won"))?,
            break_pt_missed: flag(&format!("{prefix}_break_pt_missed"))?,
        })
    };

    let match_id = text("match_id").unwrap_or("").to_string();
    if match_id.is_empty() {
        return Err(("empty_match_id", "match_id is empty".into()));
    }
    let elapsed_seconds = match text("elapsed_time") {
        None => 0,
        Some(t) => parse_elapsed(t)
            .ok_or_else(|| ("bad_elapsed_time", format!("elapsed_time `{t}` is not H:MM:SS")))?,
    };
    let point_no = match text("point_no") {
        Some(t) if !t.is_empty() => int("point_no", 0)?,
        _ => return Err(("bad_integer", "point_no is empty".into())),
    };
    let point = PointRecord {
        match_id,
        elapsed_seconds,
        set_no: int("set_no", 1)?,
        game_no: int("game_no", 1)?,
        point_no,
        server: player("server")?,
        point_victor: player("point_victor")?,
        p1_sets: int("p1_sets", 0)?,
        p2_sets: int("p2_sets", 0)?,
        p1_games: int("p1_games", 0)?,
        p2_games: int("p2_games", 0)?,
        p1_score: text("p1_score").unwrap_or("").to_string(),
        p2_score: text("p2_score").unwrap_or("").to_string(),
        p1: flags("p1")?,
        p2: flags("p2")?,
    };
    let names = (
        text("player1").unwrap_or("").to_string(),
        text("player2").unwrap_or("").to_string(),
    );
    Ok((point, names))
}

/// Writes logs in the default column layout; `parse_match_csv` with the
/// default schema reads the output back unchanged.
pub fn write_match_csv<W: Write>(logs: &[MatchPointLog], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(canonical_fields()).map_err(csv_io)?;
    let b = |v: bool| if v { "1" } else { "0" };
    for log in logs {
        for p in &log.points {
            let mut row: Vec<String> = vec![
                p.match_id.clone(),
                log.player1_name.clone(),
                log.player2_name.clone(),
                format_elapsed(p.elapsed_seconds),
                p.set_no.to_string(),
                p.game_no.to_string(),
                p.point_no.to_string(),
                p.p1_sets.to_string(),
                p.p2_sets.to_string(),
                p.p1_games.to_string(),
                p.p2_games.to_string(),
                p.p1_score.clone(),
                p.p2_score.clone(),
                p.server.number().to_string(),
                p.point_victor.number().to_string(),
            ];
            for (f1, f2) in flag_values(&p.p1).into_iter().zip(flag_values(&p.p2)) {
                row.push(b(f1).to_string());
                row.push(b(f2).to_string());
            }
            w.write_record(&row).map_err(csv_io)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn flag_values(f: &PlayerFlags) -> [bool; 9] {
    [
        f.ace,
        f.double_fault,
        f.winner,
        f.unforced_error,
        f.net_pt,
        f.net_pt_won,
        f.break_pt,
        f.break_pt_won,
        f.break_pt_missed,
    ]
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Checks every record invariant; violations are reported, never raised.
pub fn validate_log(log: &MatchPointLog) -> ValidationReport {
    let mut report = ValidationReport { record_count: log.points.len(), ..Default::default() };
    let errors = &mut report.errors;
    if log.points.is_empty() {
        errors.push(Issue::new(0, "non_empty", "log contains no points"));
    }
    for (i, p) in log.points.iter().enumerate() {
        if p.match_id != log.match_id {
            errors.push(Issue::new(
                i,
                "match_id",
                format!("record match_id `{}` differs from log `{}`", p.match_id, log.match_id),
            ));
        }
        if p.point_no == 0 {
            errors.push(Issue::new(i, "point_no_positive", "point_no must be >= 1"));
        }
        if p.set_no == 0 {
            errors.push(Issue::new(i, "set_no_positive", "set_no must be >= 1"));
        }
        if p.game_no == 0 {
            errors.push(Issue::new(i, "game_no_positive", "game_no must be >= 1"));
        }
        if i > 0 {
            let prev = &log.points[i - 1];
            if p.point_no <= prev.point_no {
                errors.push(Issue::new(
                    i,
                    "point_no_monotone",
                    format!("point_no {} does not exceed previous {}", p.point_no, prev.point_no),
                ));
            }
            if p.elapsed_seconds < prev.elapsed_seconds {
                errors.push(Issue::new(
                    i,
                    "elapsed_monotone",
                    format!(
                        "elapsed time {} precedes previous {}",
                        format_elapsed(p.elapsed_seconds),
                        format_elapsed(prev.elapsed_seconds)
                    ),
                ));
            }
        }
        for player in [Player::One, Player::Two] {
            let f = p.flags(player);
            let n = player.number();
            if f.net_pt_won && !f.net_pt {
                errors.push(Issue::new(i, "net_pt_implication", format!("p{n}_net_pt_won set without p{n}_net_pt")));
            }
            if f.break_pt_won && !f.break_pt {
                errors.push(Issue::new(
                    i,
                    "break_pt_implication",
                    format!("p{n}_break_pt_won set without p{n}_break_pt"),
                ));
            }
            if f.break_pt_won && f.break_pt_missed {
                errors.push(Issue::new(
                    i,
                    "break_pt_exclusive",
                    format!("p{n}_break_pt_won and p{n}_break_pt_missed both set"),
                ));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "match_id,player1,player2,elapsed_time,set_no,game_no,point_no,p1_sets,p2_sets,p1_games,p2_games,p1_score,p2_score,server,point_victor,p1_ace,p2_ace,p1_net_pt,p2_net_pt,p1_net_pt_won,p2_net_pt_won,p1_break_pt,p2_break_pt,p1_break_pt_won,p2_break_pt_won";

    fn parse(text: &str) -> ParsedMatches {
        parse_match_csv(text.as_bytes(), &ColumnSchema::default()).unwrap()
    }

    #[test]
    fn minimal_file_gives_one_point() {
        let csv = format!("{HEADER}\nm1,A,B,0:00:00,1,1,1,0,0,0,0,0,0,1,1,1,0,0,0,0,0,0,0,0,0\n");
        let parsed = parse(&csv);
        assert_eq!(parsed.logs.len(), 1);
        assert_eq!(parsed.logs[0].points.len(), 1);
        let p = &parsed.logs[0].points[0];
        assert_eq!(p.server, Player::One);
        assert!(p.p1.ace);
        assert_eq!(parsed.logs[0].player1_name, "A");
        assert!(parsed.row_errors.is_empty());
    }

    #[test]
    fn elapsed_time_formats() {
        assert_eq!(parse_elapsed("0:42:13"), Some(2533));
        assert_eq!(parse_elapsed("00:42:13"), Some(2533));
        assert_eq!(parse_elapsed("4:42:13"), Some(4 * 3600 + 2533));
        assert_eq!(parse_elapsed("0:4:13"), None);
        assert_eq!(parse_elapsed("0:61:00"), None);
        assert_eq!(parse_elapsed("abc"), None);
        assert_eq!(format_elapsed(2533), "0:42:13");
    }

    #[test]
    fn interleaved_matches_are_regrouped() {
        let mut csv = format!("{HEADER}\n");
        // fixture: m1 and m2 interleaved, m1 out of order
        for (id, no) in [("m1", 2), ("m2", 1), ("m1", 1), ("m2", 2), ("m2", 3), ("m1", 3)] {
            csv.push_str(&format!("{id},A,B,0:00:0{no},1,1,{no},0,0,0,0,0,0,1,2,0,0,0,0,0,0,0,0,0,0\n"));
        }
        let parsed = parse(&csv);
        assert_eq!(parsed.logs.len(), 2);
        assert_eq!(parsed.logs[0].match_id, "m1");
        assert_eq!(parsed.logs[1].match_id, "m2");
        for log in &parsed.logs {
            let nos: Vec<u32> = log.points.iter().map(|p| p.point_no).collect();
            assert_eq!(nos, vec![1, 2, 3]);
        }
    }

    #[test]
    fn bad_elapsed_row_dropped() {
        let csv = format!(
            "{HEADER}\nm1,A,B,0:00:00,1,1,1,0,0,0,0,0,0,1,1,0,0,0,0,0,0,0,0,0,0\nm1,A,B,xx,1,1,2,0,0,0,0,0,0,1,1,0,0,0,0,0,0,0,0,0,0\n"
        );
        let parsed = parse(&csv);
        assert_eq!(parsed.logs[0].points.len(), 1);
        assert_eq!(parsed.row_errors.len(), 1);
        assert_eq!(parsed.row_errors[0].row, 1);
        assert_eq!(parsed.row_errors[0].rule, "bad_elapsed_time");
    }

    #[test]
    fn missing_mandatory_column_is_schema_error() {
        let csv = "match_id,point_no,server\nm1,1,1\n";
        let err = parse_match_csv(csv.as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn empty_input_is_schema_error() {
        let err = parse_match_csv("".as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn malformed_csv_reports_line() {
        let csv = "match_id,point_no,server,point_victor\nm1,1,1,1\nm1,2,1\n";
        match parse_match_csv(csv.as_bytes(), &ColumnSchema::default()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_optional_flags_warn_and_default() {
        let csv = "match_id,point_no,server,point_victor\nm1,1,1,2\n";
        let parsed = parse(csv);
        assert!(!parsed.warnings.is_empty());
        let p = &parsed.logs[0].points[0];
        assert_eq!(p.p1, PlayerFlags::default());
        assert_eq!(p.point_victor, Player::Two);
        assert!(validate_log(&parsed.logs[0]).is_accepted());
    }

    #[test]
    fn schema_file_remaps_columns() {
        let schema = ColumnSchema::from_toml_str("point_victor = \"PointWinner\"\nserver = \"PointServer\"").unwrap();
        let csv = "match_id,point_no,PointServer,PointWinner\nm1,1,2,1\n";
        let parsed = parse_match_csv(csv.as_bytes(), &schema).unwrap();
        let p = &parsed.logs[0].points[0];
        assert_eq!((p.server, p.point_victor), (Player::Two, Player::One));
        assert!(ColumnSchema::from_toml_str("bogus = \"x\"").is_err());
    }

    fn log_with(nos: &[u32]) -> MatchPointLog {
        let points = nos
            .iter()
            .map(|&n| PointRecord {
                match_id: "m".into(),
                elapsed_seconds: 0,
                set_no: 1,
                game_no: 1,
                point_no: n,
                server: Player::One,
                point_victor: Player::One,
                p1_sets: 0,
                p2_sets: 0,
                p1_games: 0,
                p2_games: 0,
                p1_score: "0".into(),
                p2_score: "0".into(),
                p1: PlayerFlags::default(),
                p2: PlayerFlags::default(),
            })
            .collect();
        MatchPointLog { match_id: "m".into(), player1_name: "A".into(), player2_name: "B".into(), points }
    }

    #[test]
    fn valid_log_has_no_errors() {
        assert!(validate_log(&log_with(&[1, 2, 3])).errors.is_empty());
    }

    #[test]
    fn non_monotone_point_numbers() {
        let report = validate_log(&log_with(&[1, 3, 2]));
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].row, 2);
        assert_eq!(report.errors[0].rule, "point_no_monotone");
    }

    #[test]
    fn net_point_implication() {
        let mut log = log_with(&[1]);
        log.points[0].p1.net_pt_won = true;
        let report = validate_log(&log);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].rule, "net_pt_implication");
    }

    #[test]
    fn break_point_rules() {
        let mut log = log_with(&[1]);
        log.points[0].p2.break_pt = true;
        log.points[0].p2.break_pt_won = true;
        log.points[0].p2.break_pt_missed = true;
        let rules: Vec<_> = validate_log(&log).errors.into_iter().map(|e| e.rule).collect();
        assert_eq!(rules, vec!["break_pt_exclusive"]);
        assert!(!validate_log(&log_with(&[])).is_accepted());
    }

    #[test]
    fn swap_players_is_involution() {
        let mut log = log_with(&[1, 2]);
        log.points[1].point_victor = Player::Two;
        log.points[0].p1.ace = true;
        assert_eq!(log.swap_players().swap_players(), log);
        assert!(log.swap_players().points[0].p2.ace);
    }
}
