#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

pub fn fixture_files(ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    v.sort();
    v
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("covsynth").chain(args.iter().copied());
    let code = covsynth::app::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

pub mod dot_grammar {
    //! Recursive-descent checker for the Graphviz DOT language (graphs,
    //! node/edge/attribute statements, subgraphs, ports). Returns the node
    //! and edge statement counts.

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Id(String),
        Sym(&'static str),
    }

    fn lex(src: &str) -> Result<Vec<Tok>, String> {
        let c: Vec<char> = src.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < c.len() {
            let ch = c[i];
            if ch.is_whitespace() {
                i += 1;
            } else if ch == '/' && c.get(i + 1) == Some(&'/') || ch == '#' {
                while i < c.len() && c[i] != '\n' {
                    i += 1;
                }
            } else if ch == '/' && c.get(i + 1) == Some(&'*') {
                i += 2;
                while i + 1 < c.len() && !(c[i] == '*' && c[i + 1] == '/') {
                    i += 1;
                }
                i += 2;
            } else if ch == '"' {
                let mut s = String::new();
                i += 1;
                loop {
                    match c.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') if c.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some(&x) => {
                            s.push(x);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id(s));
            } else if ch == '-' && c.get(i + 1) == Some(&'>') {
                out.push(Tok::Sym("->"));
                i += 2;
            } else if ch == '-' && c.get(i + 1) == Some(&'-') {
                out.push(Tok::Sym("--"));
                i += 2;
            } else if let Some(s) = ["{", "}", "[", "]", ";", ",", "=", ":"]
                .iter()
                .find(|s| s.starts_with(ch))
            {
                out.push(Tok::Sym(s));
                i += 1;
            } else if ch.is_alphanumeric() || ch == '_' || ch == '.' || ch == '-' {
                let start = i;
                let numeral = ch.is_ascii_digit() || ch == '.' || ch == '-';
                while i < c.len() && (c[i].is_alphanumeric() || c[i] == '_' || (numeral && c[i] == '.')) {
                    i += 1;
                }
                if i == start {
                    i += 1;
                }
                let s: String = c[start..i].iter().collect();
                if numeral && s.parse::<f64>().is_err() {
                    return Err(format!("bad numeral `{s}`"));
                }
                if !numeral && s.chars().next().unwrap().is_ascii_digit() {
                    return Err(format!("identifier starts with a digit: `{s}`"));
                }
                out.push(Tok::Id(s));
            } else {
                return Err(format!("unexpected character `{ch}`"));
            }
        }
        Ok(out)
    }

    struct P {
        t: Vec<Tok>,
        i: usize,
        directed: bool,
        nodes: usize,
        edges: usize,
    }

    const KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

    impl P {
        fn peek(&self) -> Option<&Tok> {
            self.t.get(self.i)
        }
        fn sym(&mut self, s: &str) -> bool {
            if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
                self.i += 1;
                true
            } else {
                false
            }
        }
        fn expect(&mut self, s: &str) -> Result<(), String> {
            if self.sym(s) {
                Ok(())
            } else {
                Err(format!("expected `{s}` at token {} ({:?})", self.i, self.peek()))
            }
        }
        fn kw(&mut self, k: &str) -> bool {
            if matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(k)) {
                self.i += 1;
                true
            } else {
                false
            }
        }
        fn id(&mut self) -> Result<String, String> {
            match self.peek() {
                Some(Tok::Id(s)) if !KEYWORDS.iter().any(|k| s.eq_ignore_ascii_case(k)) => {
                    let s = s.clone();
                    self.i += 1;
                    Ok(s)
                }
                other => Err(format!("expected ID at token {}, found {other:?}", self.i)),
            }
        }
        fn graph(&mut self) -> Result<(), String> {
            self.kw("strict");
            if self.kw("digraph") {
                self.directed = true;
            } else if !self.kw("graph") {
                return Err("expected `graph` or `digraph`".into());
            }
            if matches!(self.peek(), Some(Tok::Id(_))) {
                self.id()?;
            }
            self.expect("{")?;
            self.stmt_list()?;
            self.expect("}")?;
            if self.i != self.t.len() {
                return Err("trailing tokens".into());
            }
            Ok(())
        }
        fn stmt_list(&mut self) -> Result<(), String> {
            while self.peek().is_some() && self.peek() != Some(&Tok::Sym("}")) {
                self.stmt()?;
                self.sym(";");
            }
            Ok(())
        }
        fn stmt(&mut self) -> Result<(), String> {
            if self.kw("graph") || self.kw("node") || self.kw("edge") {
                return self.attr_list(true);
            }
            let subgraph_first = self.at_subgraph();
            if subgraph_first {
                self.subgraph()?;
            } else {
                self.id()?;
                if self.sym("=") {
                    self.id()?;
                    return Ok(());
                }
                self.port()?;
            }
            let mut is_edge = false;
            loop {
                let op = if self.directed { "->" } else { "--" };
                if !self.sym(op) {
                    break;
                }
                is_edge = true;
                if self.at_subgraph() {
                    self.subgraph()?;
                } else {
                    self.id()?;
                    self.port()?;
                }
            }
            if is_edge {
                self.edges += 1;
            } else if !subgraph_first {
                self.nodes += 1;
            }
            self.attr_list(false)
        }
        fn at_subgraph(&self) -> bool {
            matches!(self.peek(), Some(Tok::Sym("{")))
                || matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case("subgraph"))
        }
        fn subgraph(&mut self) -> Result<(), String> {
            if self.kw("subgraph") && matches!(self.peek(), Some(Tok::Id(_))) {
                self.id()?;
            }
            self.expect("{")?;
            self.stmt_list()?;
            self.expect("}")
        }
        fn port(&mut self) -> Result<(), String> {
            if self.sym(":") {
                self.id()?;
                if self.sym(":") {
                    self.id()?;
                }
            }
            Ok(())
        }
        fn attr_list(&mut self, required: bool) -> Result<(), String> {
            if required {
                self.expect("[")?;
            } else if !self.sym("[") {
                return Ok(());
            }
            loop {
                while !self.sym("]") {
                    self.id()?;
                    self.expect("=")?;
                    self.id()?;
                    if !self.sym(",") {
                        self.sym(";");
                    }
                }
                if !self.sym("[") {
                    return Ok(());
                }
            }
        }
    }

    /// Node and edge statement counts of a syntactically valid DOT graph.
    pub fn check(src: &str) -> Result<(usize, usize), String> {
        let mut p = P {
            t: lex(src)?,
            i: 0,
            directed: false,
            nodes: 0,
            edges: 0,
        };
        p.graph()?;
        Ok((p.nodes, p.edges))
    }

    #[test]
    fn checker_rejects_broken_input() {
        assert!(check("digraph { a -> b; }").is_ok());
        assert!(check("digraph x { a -> ; }").is_err());
        assert!(check("digraph { a [label=\"x\" }").is_err());
        assert!(check("graph { a -> b }").is_err());
        assert!(check("digraph { \"unterminated }").is_err());
        assert!(check("digraph { 1abc; }").is_err());
        assert_eq!(check("digraph { a; b; a -> b [x=1]; }"), Ok((2, 1)));
    }
}
