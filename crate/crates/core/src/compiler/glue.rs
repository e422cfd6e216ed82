use std::fmt;

use thiserror::Error;

/// What a glue is used for. The short codes end up verbatim in tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GlueRole {
    Basecase,
    ColumnCarry,
    RowCarry,
    CrawlbackEw,
    CrawlbackNs,
    DelimeterN,
    DelimeterE,
    Corner,
    DecisionFlag,
    FirstCorner,
    Popup,
    Popright,
}

impl GlueRole {
    const ALL: [GlueRole; 12] = [
        GlueRole::Basecase,
        GlueRole::ColumnCarry,
        GlueRole::RowCarry,
        GlueRole::CrawlbackEw,
        GlueRole::CrawlbackNs,
        GlueRole::DelimeterN,
        GlueRole::DelimeterE,
        GlueRole::Corner,
        GlueRole::DecisionFlag,
        GlueRole::FirstCorner,
        GlueRole::Popup,
        GlueRole::Popright,
    ];

    pub fn code(self) -> &'static str {
        match self {
            GlueRole::Basecase => "bc",
            GlueRole::ColumnCarry => "col",
            GlueRole::RowCarry => "row",
            GlueRole::CrawlbackEw => "cbEW",
            GlueRole::CrawlbackNs => "cbNS",
            GlueRole::DelimeterN => "D",
            GlueRole::DelimeterE => "DR",
            GlueRole::Corner => "K",
            GlueRole::DecisionFlag => "dec",
            GlueRole::FirstCorner => "Cf",
            GlueRole::Popup => "pu",
            GlueRole::Popright => "pr",
        }
    }

    fn from_code(s: &str) -> Option<GlueRole> {
        GlueRole::ALL.into_iter().find(|r| r.code() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PopState {
    Pop,
    WaitToPop,
}

/// Structured glue label. Every field is bounded, and `token` is injective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GluePayload {
    pub role: GlueRole,
    /// Template cell the glue feeds, 1-based within the 4x4 block.
    pub cell: Option<(u8, u8)>,
    /// Coding trits known to the sender, oldest first (at most two).
    pub trits: Vec<u8>,
    pub onoff: Option<bool>,
    pub masked: bool,
    pub phase: Option<u8>,
    pub popstate: Option<PopState>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed glue token {token:?}: {reason}")]
pub struct TokenError {
    pub token: String,
    pub reason: &'static str,
}

impl GluePayload {
    pub fn new(role: GlueRole) -> Self {
        GluePayload { role, cell: None, trits: Vec::new(), onoff: None, masked: false, phase: None, popstate: None }
    }

    /// Canonical serialization: fields in a fixed order separated by ':',
    /// with "I:" in front of glues sent by masked tiles.
    pub fn token(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.masked {
            parts.push("I".into());
        }
        parts.push(self.role.code().into());
        if let Some((x, y)) = self.cell {
            parts.push(format!("c{x}{y}"));
        }
        if !self.trits.is_empty() {
            parts.push(format!("t{}", self.trits.iter().map(|t| t.to_string()).collect::<String>()));
        }
        if let Some(p) = self.phase {
            parts.push(format!("p{p}"));
        }
        match self.popstate {
            Some(PopState::Pop) => parts.push("POP".into()),
            Some(PopState::WaitToPop) => parts.push("WAIT".into()),
            None => {}
        }
        match self.onoff {
            Some(true) => parts.push("*on".into()),
            Some(false) => parts.push("*off".into()),
            None => {}
        }
        parts.join(":")
    }

    pub fn parse(token: &str) -> Result<GluePayload, TokenError> {
        let err = |reason| TokenError { token: token.to_string(), reason };
        let mut parts = token.split(':').peekable();
        let masked = parts.next_if_eq(&"I").is_some();
        let role = parts.next().and_then(GlueRole::from_code).ok_or_else(|| err("unknown role"))?;
        let mut p = GluePayload::new(role);
        p.masked = masked;
        // Fields must appear in canonical order, each at most once.
        let mut rank = 0;
        for part in parts {
            let (r, ok) = match part {
                "POP" => (4, p.popstate.replace(PopState::Pop).is_none()),
                "WAIT" => (4, p.popstate.replace(PopState::WaitToPop).is_none()),
                "*on" => (5, p.onoff.replace(true).is_none()),
                "*off" => (5, p.onoff.replace(false).is_none()),
                _ => {
                    let (head, rest) = part.split_at(part.len().min(1));
                    let digits: Vec<u8> = rest.bytes().map(|b| b.wrapping_sub(b'0')).collect();
                    if rest.is_empty() || digits.iter().any(|&d| d > 9) {
                        return Err(err("bad field"));
                    }
                    match head {
                        "c" if digits.len() == 2 && digits.iter().all(|&d| (1..=4).contains(&d)) => {
                            (1, p.cell.replace((digits[0], digits[1])).is_none())
                        }
                        "t" if digits.len() <= 2 && digits.iter().all(|&d| (1..=3).contains(&d)) => {
                            p.trits = digits;
                            (2, true)
                        }
                        "p" if digits.len() == 1 && digits[0] < 4 => (3, p.phase.replace(digits[0]).is_none()),
                        _ => return Err(err("bad field")),
                    }
                }
            };
            if !ok || r <= rank {
                return Err(err("field out of order or repeated"));
            }
            rank = r;
        }
        Ok(p)
    }
}

impl fmt::Display for GluePayload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fragments_are_kept_verbatim() {
        let mut p = GluePayload::new(GlueRole::CrawlbackEw);
        p.cell = Some((2, 3));
        p.trits = vec![1, 2];
        p.phase = Some(2);
        p.onoff = Some(true);
        assert_eq!(p.token(), "cbEW:c23:t12:p2:*on");
        p.masked = true;
        p.onoff = Some(false);
        assert_eq!(p.token(), "I:cbEW:c23:t12:p2:*off");
        for (role, code) in [
            (GlueRole::DelimeterN, "D"),
            (GlueRole::DelimeterE, "DR"),
            (GlueRole::Corner, "K"),
            (GlueRole::DecisionFlag, "dec"),
            (GlueRole::FirstCorner, "Cf"),
        ] {
            assert_eq!(GluePayload::new(role).token(), code);
        }
    }

    #[test]
    fn parse_inverts_token() {
        let mut p = GluePayload::new(GlueRole::Popup);
        p.popstate = Some(PopState::WaitToPop);
        p.trits = vec![3];
        assert_eq!(GluePayload::parse(&p.token()).unwrap(), p);
    }

    #[test]
    fn rejects_noise() {
        for bad in ["", "zz", "bc:c55", "bc:t4", "bc:*on:c11", "bc:c11:c12", "I", "bc:", "bc:p7"] {
            assert!(GluePayload::parse(bad).is_err(), "{bad}");
        }
    }
}
