// SPDX-License-Identifier: Apache-2.0

//! Semantic situation of a mobile user: (location type, season, day part).
//!
//! The physical context (a GPS fix and a local civil timestamp) is mapped to
//! three symbolic dimensions. Seasons follow the meteorological convention
//! (Dec-Feb winter and so on, northern hemisphere only). Day parts partition
//! the clock as matin [04:00, 12:00), midi [12:00, 17:00), soir otherwise.
//! Location types come from a flat radius gazetteer.

use crate::context::{Dimension, Item, Itemset};
use crate::text::normalize_token;
use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use thiserror::Error;

const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Error)]
pub enum SituationError {
    #[error("invalid coordinate ({lat}, {lon})")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("invalid civil time: {0}")]
    InvalidTime(String),
    #[error("unmapped location ({lat}, {lon}): no gazetteer entry contains this point")]
    UnmappedLocation { lat: f64, lon: f64 },
    #[error("gazetteer is empty")]
    EmptyGazetteer,
    #[error("gazetteer line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid situation: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, SituationError> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(SituationError::InvalidCoordinate { lat, lon });
        }
        Ok(GeoPoint { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    /// Great-circle distance in meters (haversine).
    pub fn distance_m(&self, other: &GeoPoint) -> f64 {
        let (phi1, phi2) = (self.lat.to_radians(), other.lat.to_radians());
        let dphi = (other.lat - self.lat).to_radians();
        let dlambda = (other.lon - self.lon).to_radians();
        let a = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_M * a.sqrt().min(1.0).asin()
    }

    /// Parses `lat,lon`.
    pub fn parse(s: &str) -> Result<Self, SituationError> {
        let bad = || SituationError::Invalid(format!("expected `lat,lon`, got {s:?}"));
        let (lat, lon) = s.split_once(',').ok_or_else(bad)?;
        let lat: f64 = lat.trim().parse().map_err(|_| bad())?;
        let lon: f64 = lon.trim().parse().map_err(|_| bad())?;
        GeoPoint::new(lat, lon)
    }
}

/// Local civil date and time, minute resolution. No timezone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CivilTime(NaiveDateTime);

impl CivilTime {
    pub fn new(year: i32, month: u32, day: u32, hour: u32, minute: u32) -> Result<Self, SituationError> {
        NaiveDate::from_ymd_opt(year, month, day)
            .and_then(|d| d.and_hms_opt(hour, minute, 0))
            .map(CivilTime)
            .ok_or_else(|| SituationError::InvalidTime(format!("{year:04}-{month:02}-{day:02} {hour:02}:{minute:02}")))
    }

    /// Accepts `2012-03-18T18:05`, `2012-03-18 18:05[:00]` or the diary
    /// style `Sun Mar 18 18:05:00 2012`, with English or French day and
    /// month abbreviations (`Dim Fev 5 16:30:00 2012`).
    pub fn parse(s: &str) -> Result<Self, SituationError> {
        const FORMATS: [&str; 5] =
            ["%Y-%m-%dT%H:%M", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M", "%Y-%m-%d %H:%M:%S", "%a %b %d %H:%M:%S %Y"];
        let s = s.trim();
        let translated = french_abbreviations(s);
        let candidates = std::iter::once(s).chain(translated.as_deref());
        candidates
            .flat_map(|c| FORMATS.iter().map(move |f| (c, f)))
            .find_map(|(c, f)| NaiveDateTime::parse_from_str(c, f).ok())
            .map(|dt| CivilTime(dt.with_second(0).unwrap_or(dt)))
            .ok_or_else(|| SituationError::InvalidTime(s.to_string()))
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn hour(&self) -> u32 {
        self.0.hour()
    }

    pub fn minute(&self) -> u32 {
        self.0.minute()
    }
}

/// Rewrites `Dim Fev 5 ...` as `Sun Feb 5 ...`; `None` when nothing changes.
fn french_abbreviations(s: &str) -> Option<String> {
    const DAYS: [(&str, &str); 7] = [
        ("lun", "Mon"),
        ("mar", "Tue"),
        ("mer", "Wed"),
        ("jeu", "Thu"),
        ("ven", "Fri"),
        ("sam", "Sat"),
        ("dim", "Sun"),
    ];
    const MONTHS: [(&str, &str); 12] = [
        ("jan", "Jan"),
        ("fev", "Feb"),
        ("mar", "Mar"),
        ("avr", "Apr"),
        ("mai", "May"),
        ("jui", "Jun"),
        ("jul", "Jul"),
        ("aou", "Aug"),
        ("sep", "Sep"),
        ("oct", "Oct"),
        ("nov", "Nov"),
        ("dec", "Dec"),
    ];
    let fold = |t: &str| {
        t.to_lowercase()
            .chars()
            .map(|c| match c {
                'é' | 'è' | 'ê' => 'e',
                'û' | 'ù' => 'u',
                'î' => 'i',
                other => other,
            })
            .filter(|c| *c != '.')
            .collect::<String>()
    };
    let mut parts: Vec<String> = s.split_whitespace().map(str::to_string).collect();
    if parts.len() != 5 {
        return None;
    }
    let day = fold(&parts[0]);
    let month = fold(&parts[1]);
    let day = DAYS.iter().find(|(fr, _)| day.starts_with(fr))?.1;
    let month = match month.as_str() {
        "juin" => "Jun",
        "juil" | "juillet" => "Jul",
        m => MONTHS.iter().find(|(fr, _)| m.starts_with(fr))?.1,
    };
    parts[0] = day.to_string();
    parts[1] = month.to_string();
    let out = parts.join(" ");
    (out != s).then_some(out)
}

impl fmt::Display for CivilTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%dT%H:%M"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Season {
    Printemps,
    Ete,
    Automne,
    Hiver,
}

impl Season {
    pub const ALL: [Season; 4] = [Season::Printemps, Season::Ete, Season::Automne, Season::Hiver];

    pub fn token(&self) -> &'static str {
        match self {
            Season::Printemps => "printemps",
            Season::Ete => "été",
            Season::Automne => "automne",
            Season::Hiver => "hiver",
        }
    }

    pub fn parse(token: &str) -> Option<Season> {
        match normalize_token(token).as_str() {
            "printemps" => Some(Season::Printemps),
            "été" | "ete" => Some(Season::Ete),
            "automne" => Some(Season::Automne),
            "hiver" => Some(Season::Hiver),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DayPart {
    Matin,
    Midi,
    Soir,
}

impl DayPart {
    pub const ALL: [DayPart; 3] = [DayPart::Matin, DayPart::Midi, DayPart::Soir];

    pub fn token(&self) -> &'static str {
        match self {
            DayPart::Matin => "matin",
            DayPart::Midi => "midi",
            DayPart::Soir => "soir",
        }
    }

    pub fn parse(token: &str) -> Option<DayPart> {
        match normalize_token(token).as_str() {
            "matin" => Some(DayPart::Matin),
            "midi" => Some(DayPart::Midi),
            "soir" => Some(DayPart::Soir),
            _ => None,
        }
    }
}

pub fn season_of(t: &CivilTime) -> Season {
    match t.month() {
        12 | 1 | 2 => Season::Hiver,
        3..=5 => Season::Printemps,
        6..=8 => Season::Ete,
        _ => Season::Automne,
    }
}

pub fn day_part_of(t: &CivilTime) -> DayPart {
    match t.hour() {
        4..=11 => DayPart::Matin,
        12..=16 => DayPart::Midi,
        _ => DayPart::Soir,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Situation {
    location_type: String,
    season: Season,
    day_part: DayPart,
}

impl Situation {
    pub fn new(location_type: &str, season: Season, day_part: DayPart) -> Result<Self, SituationError> {
        let location_type = normalize_token(location_type);
        if location_type.is_empty() {
            return Err(SituationError::Invalid("empty location type".into()));
        }
        Ok(Situation { location_type, season, day_part })
    }

    pub fn location_type(&self) -> &str {
        &self.location_type
    }

    pub fn season(&self) -> Season {
        self.season
    }

    pub fn day_part(&self) -> DayPart {
        self.day_part
    }

    /// The situation as dimension-tagged items, for matching against rule premises.
    pub fn to_itemset(&self) -> Itemset {
        [
            Item::tagged(Dimension::LocationType, &self.location_type),
            Item::tagged(Dimension::Season, self.season.token()),
            Item::tagged(Dimension::DayPart, self.day_part.token()),
        ]
        .into_iter()
        .collect()
    }
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.location_type, self.season.token(), self.day_part.token())
    }
}

/// Number of `partial`'s tokens equal to the matching dimension of `s`.
/// Class items are ignored.
pub fn overlap(s: &Situation, partial: &Itemset) -> usize {
    partial
        .iter()
        .filter(|item| match item.dimension() {
            Dimension::LocationType => item.value() == s.location_type,
            Dimension::Season => item.value() == s.season.token(),
            Dimension::DayPart => item.value() == s.day_part.token(),
            Dimension::Class => false,
        })
        .count()
}

/// Two situations are similar when they agree on at least two dimensions.
pub fn is_similar(s: &Situation, partial: &Itemset) -> bool {
    overlap(s, partial) >= 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct GazetteerEntry {
    pub center: GeoPoint,
    pub radius_m: f64,
    pub location_type: String,
}

#[derive(Clone, Debug, Default)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
}

impl Gazetteer {
    pub fn new(entries: Vec<GazetteerEntry>) -> Result<Self, SituationError> {
        for e in &entries {
            if !e.radius_m.is_finite() || e.radius_m <= 0.0 {
                return Err(SituationError::Invalid(format!("radius must be positive, got {}", e.radius_m)));
            }
            if e.location_type.is_empty() {
                return Err(SituationError::Invalid("empty location type".into()));
            }
        }
        Ok(Gazetteer { entries })
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    /// TSV `lat  lon  radius_m  location_type`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SituationError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let err = |reason: String| SituationError::Parse { line: line_no, reason };
            if fields.len() != 4 {
                return Err(err(format!("expected 4 columns, found {}", fields.len())));
            }
            let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(format!("bad {what} {s:?}")));
            let center = GeoPoint::new(num(fields[0], "latitude")?, num(fields[1], "longitude")?)
                .map_err(|e| err(e.to_string()))?;
            let radius_m = num(fields[2], "radius")?;
            if radius_m.is_nan() || radius_m <= 0.0 {
                return Err(err(format!("radius must be positive, got {radius_m}")));
            }
            let location_type = normalize_token(fields[3]);
            if location_type.is_empty() {
                return Err(err("empty location type".into()));
            }
            entries.push(GazetteerEntry { center, radius_m, location_type });
        }
        Ok(Gazetteer { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SituationError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| SituationError::Io { path: path.display().to_string(), source })?;
        Gazetteer::parse(&text)
    }
}

/// Type of the nearest gazetteer entry whose radius contains `p`.
pub fn location_type(gz: &Gazetteer, p: &GeoPoint) -> Result<String, SituationError> {
    if gz.entries.is_empty() {
        return Err(SituationError::EmptyGazetteer);
    }
    gz.entries
        .iter()
        .map(|e| (e.center.distance_m(p), e))
        .filter(|(d, e)| *d <= e.radius_m)
        .min_by(|(da, a), (db, b)| da.total_cmp(db).then_with(|| a.location_type.cmp(&b.location_type)))
        .map(|(_, e)| e.location_type.clone())
        .ok_or(SituationError::UnmappedLocation { lat: p.lat, lon: p.lon })
}

pub fn build_situation(gz: &Gazetteer, p: &GeoPoint, t: &CivilTime) -> Result<Situation, SituationError> {
    let location = location_type(gz, p)?;
    Situation::new(&location, season_of(t), day_part_of(t))
}
