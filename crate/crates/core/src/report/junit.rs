//! JUnit XML. One testsuite per story and one testcase per scenario; a
//! failing step becomes the testcase's `<failure>`, untested steps are listed
//! in `<system-out>`. Step tallies are attached as testsuite properties.

use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, BytesText, Event};
use quick_xml::Writer;

use super::StoryFindings;
use crate::ontology::{ConsistencyReport, FindingCode};
use crate::verifier::{ScenarioVerdict, StepStatus, VerificationReport};

struct Xml(Writer<Vec<u8>>);

// Writes go to an in-memory buffer, which cannot fail.
impl Xml {
    fn new() -> Xml {
        let mut writer = Writer::new_with_indent(Vec::new(), b' ', 2);
        writer
            .write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))
            .expect("in-memory write");
        Xml(writer)
    }

    fn start(&mut self, name: &str, attrs: &[(&str, &str)]) {
        let tag = BytesStart::new(name).with_attributes(attrs.iter().copied());
        self.0.write_event(Event::Start(tag)).expect("in-memory write");
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        let tag = BytesStart::new(name).with_attributes(attrs.iter().copied());
        self.0.write_event(Event::Empty(tag)).expect("in-memory write");
    }

    fn end(&mut self, name: &str) {
        self.0.write_event(Event::End(BytesEnd::new(name))).expect("in-memory write");
    }

    fn text(&mut self, text: &str) {
        self.0.write_event(Event::Text(BytesText::new(text))).expect("in-memory write");
    }

    fn element(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.start(name, attrs);
        self.text(text);
        self.end(name);
    }

    fn finish(self) -> String {
        let mut out = String::from_utf8(self.0.into_inner()).expect("writer emits UTF-8");
        out.push('\n');
        out
    }
}

fn properties(xml: &mut Xml, props: &[(&str, usize)]) {
    xml.start("properties", &[]);
    for (name, value) in props {
        xml.empty("property", &[("name", name), ("value", &value.to_string())]);
    }
    xml.end("properties");
}

pub(super) fn run(reports: &[VerificationReport]) -> String {
    let scenarios = reports.iter().flat_map(|r| &r.scenarios);
    let tests = scenarios.clone().count();
    let failures = scenarios.clone().filter(|s| s.overall == ScenarioVerdict::Fail).count();
    let skipped = scenarios.filter(|s| s.overall == ScenarioVerdict::Untested).count();

    let mut xml = Xml::new();
    xml.start(
        "testsuites",
        &[
            ("name", "uiverify"),
            ("tests", &tests.to_string()),
            ("failures", &failures.to_string()),
            ("skipped", &skipped.to_string()),
            ("errors", "0"),
        ],
    );
    for report in reports {
        let failures = report.scenarios.iter().filter(|s| s.overall == ScenarioVerdict::Fail).count();
        let skipped = report.scenarios.iter().filter(|s| s.overall == ScenarioVerdict::Untested).count();
        xml.start(
            "testsuite",
            &[
                ("name", &report.story),
                ("tests", &report.scenarios.len().to_string()),
                ("failures", &failures.to_string()),
                ("skipped", &skipped.to_string()),
                ("errors", "0"),
            ],
        );
        properties(
            &mut xml,
            &[
                ("steps.pass", report.counts.pass),
                ("steps.fail", report.counts.fail),
                ("steps.untested", report.counts.untested),
            ],
        );
        for scenario in &report.scenarios {
            xml.start("testcase", &[("name", &scenario.title), ("classname", &report.story)]);
            match scenario.overall {
                ScenarioVerdict::Untested => {
                    xml.empty("skipped", &[("message", "scenario not executed")]);
                }
                _ => {
                    for (i, step) in scenario.steps.iter().enumerate() {
                        if let Some(finding) = &step.finding {
                            let body = format!("step {} (line {}): {}", i + 1, step.step.line, step.step);
                            xml.element(
                                "failure",
                                &[("type", &finding.code.to_string()), ("message", &finding.message)],
                                &body,
                            );
                        }
                    }
                    let untested: Vec<String> = scenario
                        .steps
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.status == StepStatus::Untested)
                        .map(|(i, s)| format!("? step {}: {}", i + 1, s.step))
                        .collect();
                    if !untested.is_empty() {
                        xml.element("system-out", &[], &untested.join("\n"));
                    }
                }
            }
            xml.end("testcase");
        }
        xml.end("testsuite");
    }
    xml.end("testsuites");
    xml.finish()
}

pub(super) fn lint(results: &[StoryFindings]) -> String {
    let mut xml = Xml::new();
    let failures = results.iter().filter(|r| !r.findings.is_empty()).count();
    xml.start(
        "testsuites",
        &[
            ("name", "uiverify lint"),
            ("tests", &results.len().to_string()),
            ("failures", &failures.to_string()),
            ("errors", "0"),
        ],
    );
    for result in results {
        let failed = usize::from(!result.findings.is_empty());
        xml.start(
            "testsuite",
            &[
                ("name", &result.story),
                ("tests", "1"),
                ("failures", &failed.to_string()),
                ("errors", "0"),
            ],
        );
        properties(&mut xml, &[("findings", result.findings.len())]);
        xml.start("testcase", &[("name", &result.source), ("classname", &result.story)]);
        for finding in &result.findings {
            xml.element(
                "failure",
                &[("type", &finding.code.to_string()), ("message", &finding.message)],
                &finding.to_string(),
            );
        }
        xml.end("testcase");
        xml.end("testsuite");
    }
    xml.end("testsuites");
    xml.finish()
}

pub(super) fn consistency(label: &str, report: &ConsistencyReport) -> String {
    let failing = FindingCode::ALL
        .iter()
        .filter(|code| report.findings.iter().any(|f| f.code == **code))
        .count();
    let suite = format!("ontology {label}");
    let mut xml = Xml::new();
    xml.start(
        "testsuite",
        &[
            ("name", &suite),
            ("tests", &FindingCode::ALL.len().to_string()),
            ("failures", &failing.to_string()),
            ("errors", "0"),
        ],
    );
    properties(&mut xml, &[("findings", report.findings.len())]);
    for code in FindingCode::ALL {
        xml.start("testcase", &[("name", code.as_str()), ("classname", &suite)]);
        for finding in report.findings.iter().filter(|f| f.code == code) {
            xml.element(
                "failure",
                &[("type", code.as_str()), ("message", &finding.message)],
                &finding.to_string(),
            );
        }
        xml.end("testcase");
    }
    xml.end("testsuite");
    xml.finish()
}
