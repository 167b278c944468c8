use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::str::FromStr;

use spex_core::learner::{read_transcript, ScriptedTeacher, Teacher};
use spex_core::pattern::witness_to_chart;
use spex_core::{Assignment, Error, Result};

/// `--teacher` argument.
#[derive(Clone, Debug)]
pub enum TeacherArg {
    Simulated(PathBuf),
    Scripted(PathBuf),
    Prompt,
}

impl FromStr for TeacherArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(':') {
            Some(("simulated", path)) if !path.is_empty() => Ok(TeacherArg::Simulated(path.into())),
            Some(("scripted", path)) if !path.is_empty() => Ok(TeacherArg::Scripted(path.into())),
            None if s == "prompt" => Ok(TeacherArg::Prompt),
            _ => Err(format!("expected simulated:<target-file>, scripted:<answers-file> or prompt, got {s:?}")),
        }
    }
}

/// Loads a scripted teacher from either a saved transcript (NDJSON) or a plain
/// list of `0`/`1` answers separated by whitespace or commas.
pub fn load_script(path: &PathBuf) -> Result<ScriptedTeacher> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let records = read_transcript(text.as_bytes())?;
        return Ok(ScriptedTeacher::from_transcript(&records));
    }
    let bits = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Error::Parse(format!("answers file: {other:?} is not 0 or 1"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScriptedTeacher::from_bits(bits))
}

/// Asks a person on the terminal.
pub struct PromptTeacher<R, W> {
    input: R,
    output: W,
    pattern: bool,
    asked: usize,
}

impl<R: BufRead, W: Write> PromptTeacher<R, W> {
    pub fn new(input: R, output: W, pattern: bool) -> Self {
        PromptTeacher { input, output, pattern, asked: 0 }
    }

    fn render(&mut self, a: &Assignment) -> std::io::Result<()> {
        let values = a.to_strings();
        let headers: Vec<String> = (1..=values.len()).map(|i| format!("x{i}")).collect();
        let widths: Vec<usize> = headers.iter().zip(&values).map(|(h, v)| h.len().max(v.len())).collect();
        let row = |cells: &[String]| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join(" | ");
        writeln!(self.output, "\nquery {}", self.asked)?;
        writeln!(self.output, "  {}", row(&headers))?;
        writeln!(self.output, "  {}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"))?;
        writeln!(self.output, "  {}", row(&values))?;
        if self.pattern {
            if let Ok(chart) = witness_to_chart(a) {
                writeln!(self.output, "  chart: {}", chart.sparkline())?;
            }
        }
        Ok(())
    }
}

impl<R: BufRead, W: Write> Teacher for PromptTeacher<R, W> {
    fn answer(&mut self, a: &Assignment) -> Result<bool> {
        self.asked += 1;
        self.render(a)?;
        loop {
            let question = if self.pattern { "is this chart the pattern?" } else { "is the target true here?" };
            write!(self.output, "{question} [y/n] ")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(Error::Teacher("input closed before the run finished".into()));
            }
            match line.trim().to_ascii_lowercase().as_str() {
                "y" | "yes" | "1" => return Ok(true),
                "n" | "no" | "0" => return Ok(false),
                _ => writeln!(self.output, "please answer y or n")?,
            }
        }
    }
}
