//! Parsing for ledger queries and fact files.
//!
//! Expression grammar (whitespace-insensitive):
//!   expr  := term (("+" | "-" | "#") term)*
//!   term  := [int "*"] atom | "-" term
//!   atom  := "S(" int ("," int)+ ")" | "S3" | "Surg(" name "," "1/" int ")"
//!            | identifier
//! Queries:
//!   r0( expr )
//!   member( expr, r = rational )
//!   independent{ expr, expr, ... }
//!   dinf( expr, expr )
//!   sinf( expr )

use rug::Rational;
use serde::Deserialize;

use super::{
    bounds_negative_definite, cobordism_assert, dinf_lower_bound, filtration_member,
    froyshov_rule, independence_verdict, r0_of_expr, s_infty_of, FactKind, FactStore, Generator,
    LedgerError, ManifoldExpr, Membership, Provenance, RValue, SParam,
};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        self.skip_ws();
        let c = self.src.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: u8) -> Result<(), LedgerError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            got => Err(LedgerError::Parse(format!(
                "expected '{}', found {:?} at {}",
                c as char,
                got.map(|g| g as char),
                self.pos
            ))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, LedgerError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat(b'-') {}
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse()
            .map_err(|_| LedgerError::Parse(format!("expected integer at byte {start}")))
    }

    fn identifier(&mut self) -> Result<String, LedgerError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(LedgerError::Parse(format!("expected identifier at byte {start}")));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn rational(&mut self) -> Result<Rational, LedgerError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den == 0 {
                return Err(LedgerError::Parse("zero denominator".into()));
            }
            Ok(Rational::from((num, den)))
        } else {
            Ok(Rational::from(num))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<ManifoldExpr, LedgerError> {
    let ident = lx.identifier()?;
    match ident.as_str() {
        "S3" => Ok(ManifoldExpr::s3()),
        "S" => {
            lx.expect(b'(')?;
            let mut tuple = vec![lx.integer()?];
            while lx.eat(b',') {
                tuple.push(lx.integer()?);
            }
            lx.expect(b')')?;
            let tuple: Vec<u64> = tuple
                .into_iter()
                .map(|a| u64::try_from(a).map_err(|_| LedgerError::Parse("negative Seifert entry".into())))
                .collect::<Result<_, _>>()?;
            Ok(ManifoldExpr::generator(Generator::seifert(&tuple)?))
        }
        "Surg" => {
            lx.expect(b'(')?;
            let knot = lx.identifier()?;
            lx.expect(b',')?;
            let one = lx.integer()?;
            if one != 1 {
                return Err(LedgerError::Parse("surgery coefficient must be 1/n".into()));
            }
            lx.expect(b'/')?;
            let n = lx.integer()?;
            if n == 0 {
                return Err(LedgerError::Parse("surgery 1/0".into()));
            }
            lx.expect(b')')?;
            Ok(ManifoldExpr::generator(Generator::Surgery { knot, n }))
        }
        name => Ok(ManifoldExpr::generator(Generator::Named(name.to_string()))),
    }
}

fn parse_term(lx: &mut Lexer) -> Result<ManifoldExpr, LedgerError> {
    if lx.eat(b'-') {
        return Ok(parse_term(lx)?.neg());
    }
    if lx.eat(b'(') {
        // parenthesized signed coefficient, e.g. (-1)*S(2,3,11)
        let k = lx.integer()?;
        lx.expect(b')')?;
        lx.expect(b'*')?;
        let atom = parse_term(lx)?;
        return Ok(atom.times(k));
    }
    // optional integer coefficient
    if matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
        let k = lx.integer()?;
        lx.expect(b'*')?;
        let atom = parse_term(lx)?;
        return Ok(atom.times(k));
    }
    parse_atom(lx)
}

/// Parse a manifold expression.
pub fn parse_expr(src: &str) -> Result<ManifoldExpr, LedgerError> {
    let mut lx = Lexer::new(src);
    let e = parse_expr_inner(&mut lx)?;
    if !lx.at_end() {
        return Err(LedgerError::Parse(format!("trailing input at byte {}", lx.pos)));
    }
    Ok(e)
}

fn parse_expr_inner(lx: &mut Lexer) -> Result<ManifoldExpr, LedgerError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(b'+') | Some(b'#') => {
                lx.bump();
                acc = acc.plus(&parse_term(lx)?);
            }
            Some(b'-') => {
                lx.bump();
                acc = acc.plus(&parse_term(lx)?.neg());
            }
            _ => return Ok(acc),
        }
    }
}

/// Result of running a ledger query.
#[derive(Debug)]
pub enum QueryOutcome {
    RValueResult { subject: ManifoldExpr, value: RValue, trace: Vec<String> },
    MembershipResult { subject: ManifoldExpr, r: Rational, verdict: Membership },
    IndependenceResult { chain: Vec<(ManifoldExpr, RValue)>, trace: Vec<String> },
    DInfResult { x: ManifoldExpr, y: ManifoldExpr, lower_bound: Rational, exact: bool, trace: Vec<String> },
    SInfResult { subject: ManifoldExpr, value: Option<Rational>, is_exact: bool, trace: Vec<String> },
}

/// Parse and evaluate a query against the store.
pub fn run_query(store: &mut FactStore, query: &str) -> Result<QueryOutcome, LedgerError> {
    let mut lx = Lexer::new(query);
    if lx.eat_keyword("r0") {
        lx.expect(b'(')?;
        let expr = parse_expr_inner(&mut lx)?;
        lx.expect(b')')?;
        let (id, subject, value) = r0_of_expr(store, &expr)?;
        return Ok(QueryOutcome::RValueResult { subject, value, trace: store.trace(id) });
    }
    if lx.eat_keyword("member") {
        lx.expect(b'(')?;
        let expr = parse_expr_inner(&mut lx)?;
        lx.expect(b',')?;
        if !lx.eat_keyword("r") {
            return Err(LedgerError::Parse("expected r=<rational>".into()));
        }
        lx.expect(b'=')?;
        let r = lx.rational()?;
        lx.expect(b')')?;
        let verdict = filtration_member(store, &expr, &r)?;
        return Ok(QueryOutcome::MembershipResult { subject: expr, r, verdict });
    }
    if lx.eat_keyword("independent") {
        lx.expect(b'{')?;
        let mut family = vec![parse_expr_inner(&mut lx)?];
        while lx.eat(b',') {
            family.push(parse_expr_inner(&mut lx)?);
        }
        lx.expect(b'}')?;
        let cert = independence_verdict(store, &family)?;
        let mut trace = Vec::new();
        for id in &cert.fact_ids {
            trace.extend(store.trace(*id));
        }
        return Ok(QueryOutcome::IndependenceResult { chain: cert.chain, trace });
    }
    if lx.eat_keyword("dinf") {
        lx.expect(b'(')?;
        let x = parse_expr_inner(&mut lx)?;
        lx.expect(b',')?;
        let y = parse_expr_inner(&mut lx)?;
        lx.expect(b')')?;
        let (bound, exact, ids) = dinf_lower_bound(store, &x, &y)?;
        let mut trace = Vec::new();
        for id in ids {
            trace.extend(store.trace(id));
        }
        return Ok(QueryOutcome::DInfResult { x, y, lower_bound: bound, exact, trace });
    }
    if lx.eat_keyword("sinf") {
        lx.expect(b'(')?;
        let expr = parse_expr_inner(&mut lx)?;
        lx.expect(b')')?;
        let (id, value, is_exact) = s_infty_of(store, &expr)?;
        return Ok(QueryOutcome::SInfResult {
            subject: expr,
            value,
            is_exact,
            trace: store.trace(id),
        });
    }
    Err(LedgerError::Parse(format!("unknown query: {query}")))
}

/// One assertion in a facts file.
#[derive(Debug, Deserialize)]
pub struct FactFileEntry {
    pub subject: String,
    pub kind: String,
    #[serde(default)]
    pub s: Option<String>,
    #[serde(default)]
    pub value: Option<String>,
    #[serde(default)]
    pub other: Option<String>,
    #[serde(default)]
    pub sign: Option<i32>,
    #[serde(default)]
    pub simply_connected: Option<bool>,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
pub struct FactFile {
    pub facts: Vec<FactFileEntry>,
}

fn parse_rvalue(src: &str) -> Result<RValue, LedgerError> {
    let s = src.trim();
    if s == "inf" || s == "infinity" {
        return Ok(RValue::Infinity);
    }
    let mut lx = Lexer::new(s);
    let q = lx.rational()?;
    if !lx.at_end() {
        return Err(LedgerError::Parse(format!("bad r-value: {src}")));
    }
    Ok(RValue::Exact(q))
}

fn parse_sparam(src: Option<&str>) -> Result<SParam, LedgerError> {
    match src {
        None | Some("all") => Ok(SParam::All),
        Some("-inf") => Ok(SParam::NegInfinity),
        Some(other) => {
            let mut lx = Lexer::new(other);
            let q = lx.rational()?;
            SParam::at(q)
        }
    }
}

/// Load a facts file (JSON) into the store.
pub fn load_facts(store: &mut FactStore, json: &str) -> Result<usize, LedgerError> {
    let file: FactFile =
        serde_json::from_str(json).map_err(|e| LedgerError::Parse(e.to_string()))?;
    let mut count = 0;
    for entry in &file.facts {
        let subject = parse_expr(&entry.subject)?;
        match entry.kind.as_str() {
            "r_eq" => {
                let v = parse_rvalue(entry.value.as_deref().ok_or_else(|| {
                    LedgerError::Parse("r_eq needs a value".into())
                })?)?;
                let s = parse_sparam(entry.s.as_deref())?;
                store.insert(
                    subject,
                    FactKind::REq { s, value: v },
                    Provenance::PaperFact(entry.provenance.clone()),
                )?;
            }
            "r_sign" => {
                store.insert(
                    subject,
                    FactKind::RSign { sign: entry.sign.unwrap_or(0) },
                    Provenance::PaperFact(entry.provenance.clone()),
                )?;
            }
            "froyshov_sign" => {
                froyshov_rule(store, &subject, entry.sign.unwrap_or(0), &entry.provenance)?;
            }
            "cobordism" => {
                let other = parse_expr(entry.other.as_deref().ok_or_else(|| {
                    LedgerError::Parse("cobordism needs the other boundary".into())
                })?)?;
                cobordism_assert(
                    store,
                    &other,
                    &subject,
                    entry.simply_connected.unwrap_or(false),
                    &entry.provenance,
                )?;
            }
            "bounds_negative_definite" => {
                bounds_negative_definite(store, &subject, &entry.provenance)?;
            }
            other => {
                return Err(LedgerError::Parse(format!("unknown fact kind {other:?}")));
            }
        }
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_examples() {
        let e = parse_expr("2*S(2,3,5) + (-1)*S(2,3,11)").unwrap();
        assert_eq!(e.num_terms(), 2);
        assert_eq!(format!("{e}"), "2*S(2,3,5) - S(2,3,11)");
        let e2 = parse_expr("S(2,3,5)#-S(2,3,11)").unwrap();
        assert_eq!(format!("{e2}"), "S(2,3,5) - S(2,3,11)");
        let e3 = parse_expr("S3").unwrap();
        assert!(e3.is_s3());
        let e4 = parse_expr("Surg(K2, 1/-2)").unwrap();
        assert_eq!(format!("{e4}"), "Surg(K2,1/-2)");
    }

    #[test]
    fn query_r0_runs_with_trace() {
        let mut store = FactStore::new();
        let out = run_query(&mut store, "r0( 2*S(2,3,5) + (-1)*S(2,3,11) )").unwrap();
        match out {
            QueryOutcome::RValueResult { value, trace, .. } => {
                assert_eq!(value, RValue::exact(1, 264));
                assert!(!trace.is_empty());
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn query_membership_and_independence() {
        let mut store = FactStore::new();
        match run_query(&mut store, "member( S3, r=1 )").unwrap() {
            QueryOutcome::MembershipResult { verdict, .. } => {
                assert_eq!(verdict, Membership::Member)
            }
            other => panic!("{other:?}"),
        }
        let mut store = FactStore::new();
        let q = "independent{ -S(2,3,5), -S(2,3,11), -S(2,3,17), -S(2,3,23), -S(2,3,29) }";
        match run_query(&mut store, q).unwrap() {
            QueryOutcome::IndependenceResult { chain, .. } => assert_eq!(chain.len(), 5),
            other => panic!("{other:?}"),
        }
        // Same value twice → HypothesisUnmet.
        let mut store = FactStore::new();
        assert!(run_query(&mut store, "independent{ -S(2,3,5), -S(2,3,5) }").is_err());
    }

    #[test]
    fn facts_file_round_trip() {
        let json = r#"{
            "facts": [
                {"subject": "Surg(K2, 1/-2)", "kind": "r_eq", "s": "all", "value": "inf",
                 "provenance": "bounds a positive definite 4-manifold (surgery on a knot)"},
                {"subject": "S(2,3,7)", "kind": "r_sign", "sign": -1, "provenance": "R(2,3,7) = -1"},
                {"subject": "-S(2,3,5)", "kind": "froyshov_sign", "sign": -1, "provenance": "h = -1"},
                {"subject": "S(2,3,11)", "kind": "bounds_negative_definite",
                 "provenance": "Seifert spheres bound negative definite"}
            ]
        }"#;
        let mut store = FactStore::new();
        let n = load_facts(&mut store, json).unwrap();
        assert_eq!(n, 4);
        assert!(store.facts().len() >= 4);
    }
}
