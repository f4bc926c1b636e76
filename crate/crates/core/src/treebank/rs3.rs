//! Reader and writer for the `.rs3` XML format.
//!
//! Attachment semantics: a child whose `relname` is `span` is the nucleus of
//! its parent span group; a child of a multinuc group whose `relname` is a
//! multinuclear relation is a nucleus sibling; any other declared `rst`
//! relation makes the child a satellite of the node it points to.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::tree::{ConstituentTree, Edu, Node, NodeBody, NodeShape, RelKind, RelationInventory, Role, SPAN};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GroupKind {
    Span,
    Multinuc,
}

#[derive(Clone, Debug)]
enum ElemKind {
    Segment { text: String },
    Group(GroupKind),
}

#[derive(Clone, Debug)]
struct Elem {
    id: String,
    parent: Option<String>,
    relname: Option<String>,
    kind: ElemKind,
}

/// Options for reading `.rs3` content.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rs3Options {
    /// Drop empty segments (with a warning) instead of rejecting the file.
    pub lenient: bool,
}

/// Parse `.rs3` content with default (strict) options.
pub fn parse_rs3(content: &str, doc_id: &str) -> Result<ConstituentTree> {
    parse_rs3_with(content, doc_id, Rs3Options::default())
}

pub fn parse_rs3_with(content: &str, doc_id: &str, opts: Rs3Options) -> Result<ConstituentTree> {
    let (inventory, mut elems) = read_elements(content)?;

    let empty: Vec<String> = elems
        .iter()
        .filter(|e| matches!(&e.kind, ElemKind::Segment { text } if text.trim().is_empty()))
        .map(|e| e.id.clone())
        .collect();
    if !empty.is_empty() {
        if !opts.lenient {
            return Err(Error::EmptySegment(empty[0].clone()));
        }
        for id in &empty {
            if elems.iter().any(|e| e.parent.as_deref() == Some(id.as_str())) {
                return Err(Error::EmptySegment(id.clone()));
            }
            log::warn!("{doc_id}: dropping empty segment `{id}`");
        }
        elems.retain(|e| !empty.contains(&e.id));
    }

    Resolver::new(&inventory, &elems)?.build(doc_id)
}

/// Relation inventory declared in the header of `.rs3` content.
pub fn read_inventory(content: &str) -> Result<RelationInventory> {
    Ok(read_elements(content)?.0)
}

fn attrs(e: &BytesStart<'_>) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| Error::MalformedXml(err.to_string()))?;
        let key = a.key.as_ref().to_owned();
        let value = a
            .normalized_value(quick_xml::XmlVersion::Implicit1_0)
            .map_err(|err| Error::MalformedXml(err.to_string()))?;
        out.insert(key, value.into_owned());
    }
    Ok(out)
}

fn predefined_entity(name: &str) -> Option<char> {
    match name {
        "amp" => Some('&'),
        "lt" => Some('<'),
        "gt" => Some('>'),
        "quot" => Some('"'),
        "apos" => Some('\''),
        _ => None,
    }
}

fn read_elements(content: &str) -> Result<(RelationInventory, Vec<Elem>)> {
    let mut reader = Reader::from_str(content);
    let mut inventory = RelationInventory::new();
    let mut elems = Vec::new();
    let mut stack: Vec<String> = Vec::new();
    let mut open_segment: Option<(Elem, String)> = None;
    let mut saw_root = false;

    let malformed = |e: quick_xml::Error| Error::MalformedXml(e.to_string());

    loop {
        let event = reader.read_event().map_err(malformed)?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let name = e.name().as_ref().to_owned();
                match name.as_str() {
                    "rst" => saw_root = true,
                    "rel" => {
                        let a = attrs(e)?;
                        let rel = a
                            .get("name")
                            .ok_or_else(|| Error::MalformedXml("<rel> without name".into()))?;
                        let kind = match a.get("type").map(String::as_str) {
                            Some("multinuc") => RelKind::Multinuc,
                            Some("rst") | None => RelKind::Rst,
                            Some(other) => return Err(Error::MalformedXml(format!("unknown relation type `{other}`"))),
                        };
                        inventory.insert(rel.clone(), kind);
                    }
                    "segment" | "group" => {
                        let a = attrs(e)?;
                        let id = a
                            .get("id")
                            .cloned()
                            .ok_or_else(|| Error::MalformedXml(format!("<{name}> without id")))?;
                        let kind = if name == "segment" {
                            ElemKind::Segment { text: String::new() }
                        } else {
                            match a.get("type").map(String::as_str) {
                                Some("span") => ElemKind::Group(GroupKind::Span),
                                Some("multinuc") => ElemKind::Group(GroupKind::Multinuc),
                                other => {
                                    return Err(Error::MalformedXml(format!(
                                        "group `{id}` has unsupported type {other:?}"
                                    )))
                                }
                            }
                        };
                        let elem = Elem {
                            id,
                            parent: a.get("parent").filter(|p| !p.is_empty()).cloned(),
                            relname: a.get("relname").filter(|r| !r.is_empty()).cloned(),
                            kind,
                        };
                        if name == "segment" && !is_empty {
                            open_segment = Some((elem, String::new()));
                        } else {
                            elems.push(elem);
                        }
                    }
                    _ => {}
                }
                if !is_empty {
                    stack.push(name);
                }
            }
            Event::Text(t) => {
                if let Some((_, buf)) = open_segment.as_mut() {
                    buf.push_str(&t.xml10_content());
                }
            }
            Event::CData(t) => {
                if let Some((_, buf)) = open_segment.as_mut() {
                    buf.push_str(&t);
                }
            }
            Event::GeneralRef(r) => {
                if let Some((_, buf)) = open_segment.as_mut() {
                    let resolved = if r.is_char_ref() {
                        r.resolve_char_ref().map_err(malformed)?
                    } else {
                        predefined_entity(&r)
                    };
                    match resolved {
                        Some(c) => buf.push(c),
                        None => return Err(Error::MalformedXml(format!("unknown entity `&{};`", &*r))),
                    }
                }
            }
            Event::End(e) => {
                let name = e.name().as_ref().to_owned();
                match stack.pop() {
                    Some(open) if open == name => {}
                    Some(open) => {
                        return Err(Error::MalformedXml(format!("</{name}> closes <{open}>")));
                    }
                    None => return Err(Error::MalformedXml(format!("unexpected </{name}>"))),
                }
                if name == "segment" {
                    if let Some((mut elem, text)) = open_segment.take() {
                        elem.kind = ElemKind::Segment {
                            text: text.trim().to_owned(),
                        };
                        elems.push(elem);
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(Error::MalformedXml(format!("unclosed <{}>", stack.join("> <"))));
    }
    if !saw_root {
        return Err(Error::MalformedXml("missing <rst> element".into()));
    }
    Ok((inventory, elems))
}

/// How a child attaches to its parent element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Attachment {
    SpanNucleus,
    MultinucNucleus,
    Satellite,
}

struct Resolver<'a> {
    elems: &'a [Elem],
    by_id: HashMap<&'a str, usize>,
    edu_of: HashMap<usize, usize>,
    children: Vec<Vec<(usize, Attachment)>>,
    root: usize,
}

impl<'a> Resolver<'a> {
    fn new(inventory: &RelationInventory, elems: &'a [Elem]) -> Result<Self> {
        let mut by_id = HashMap::new();
        for (i, e) in elems.iter().enumerate() {
            if by_id.insert(e.id.as_str(), i).is_some() {
                return Err(Error::MalformedXml(format!("duplicate node id `{}`", e.id)));
            }
        }
        let mut edu_of = HashMap::new();
        for (i, _) in elems
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, ElemKind::Segment { .. }))
        {
            let next = edu_of.len() + 1;
            edu_of.insert(i, next);
        }

        let mut children = vec![Vec::new(); elems.len()];
        let mut roots = Vec::new();
        for (i, e) in elems.iter().enumerate() {
            let Some(parent_id) = &e.parent else {
                roots.push(i);
                continue;
            };
            let &p = by_id.get(parent_id.as_str()).ok_or_else(|| Error::DanglingParentId {
                node: e.id.clone(),
                parent: parent_id.clone(),
            })?;
            let rel = e
                .relname
                .as_deref()
                .ok_or_else(|| Error::InvalidTree(format!("node `{}` has a parent but no relname", e.id)))?;
            let parent_kind = match elems[p].kind {
                ElemKind::Group(k) => Some(k),
                ElemKind::Segment { .. } => None,
            };
            let attachment = if rel == SPAN {
                if parent_kind != Some(GroupKind::Span) {
                    return Err(Error::InvalidTree(format!(
                        "node `{}` attaches with `span` to non-span node `{}`",
                        e.id, parent_id
                    )));
                }
                Attachment::SpanNucleus
            } else if parent_kind == Some(GroupKind::Multinuc) && inventory.contains(rel, RelKind::Multinuc) {
                Attachment::MultinucNucleus
            } else if inventory.contains(rel, RelKind::Rst) {
                Attachment::Satellite
            } else if inventory.knows(rel) {
                return Err(Error::InvalidTree(format!(
                    "multinuclear relation `{rel}` on `{}` whose parent is not a multinuc group",
                    e.id
                )));
            } else {
                return Err(Error::UnknownRelation(rel.to_owned()));
            };
            children[p].push((i, attachment));
        }
        if roots.len() != 1 {
            return Err(Error::MultipleRoots(roots.len()));
        }
        Ok(Resolver {
            elems,
            by_id,
            edu_of,
            children,
            root: roots[0],
        })
    }

    fn build(&self, doc_id: &str) -> Result<ConstituentTree> {
        let mut visited = vec![false; self.elems.len()];
        let mut root = self.full(self.root, &mut visited)?;
        if let Some(i) = visited.iter().position(|v| !v) {
            return Err(Error::InvalidTree(format!(
                "node `{}` is not reachable from the root (cyclic attachment)",
                self.elems[i].id
            )));
        }
        debug_assert_eq!(self.by_id.len(), self.elems.len());
        root.role = Role::Root;
        root.relation = None;

        let mut edus: Vec<(usize, &str)> = self
            .edu_of
            .iter()
            .map(|(&elem, &edu)| match &self.elems[elem].kind {
                ElemKind::Segment { text } => (edu, text.as_str()),
                ElemKind::Group(_) => unreachable!(),
            })
            .collect();
        edus.sort_unstable();
        let edus = edus.into_iter().map(|(i, text)| Edu::new(i, text)).collect();
        ConstituentTree::new(doc_id, "", edus, root)
    }

    fn enter(&self, i: usize, visited: &mut [bool]) -> Result<()> {
        if visited[i] {
            return Err(Error::InvalidTree(format!("node `{}` reached twice", self.elems[i].id)));
        }
        visited[i] = true;
        Ok(())
    }

    /// A node together with the satellites pointing at it.
    fn full(&self, i: usize, visited: &mut [bool]) -> Result<Node> {
        self.enter(i, visited)?;
        let core = self.core(i, visited)?;
        let sats: Vec<usize> = self.children[i]
            .iter()
            .filter(|(_, a)| *a == Attachment::Satellite)
            .map(|(c, _)| *c)
            .collect();
        if sats.is_empty() {
            return Ok(core);
        }
        let mut kids = Vec::with_capacity(sats.len() + 1);
        kids.push(with_role(core, Role::Nucleus, SPAN));
        for s in sats {
            let node = self.full(s, visited)?;
            kids.push(with_role(node, Role::Satellite, self.relname(s)));
        }
        self.ordered(i, kids)
    }

    /// A node without the satellites pointing at it.
    fn core(&self, i: usize, visited: &mut [bool]) -> Result<Node> {
        let id = &self.elems[i].id;
        match self.elems[i].kind {
            ElemKind::Segment { .. } => {
                if self.children[i].iter().any(|(_, a)| *a != Attachment::Satellite) {
                    return Err(Error::InvalidTree(format!("segment `{id}` has nucleus children")));
                }
                Ok(Node::leaf(Role::Root, None, self.edu_of[&i]))
            }
            ElemKind::Group(GroupKind::Span) => {
                let nuclei: Vec<usize> = self.children[i]
                    .iter()
                    .filter(|(_, a)| *a == Attachment::SpanNucleus)
                    .map(|(c, _)| *c)
                    .collect();
                if nuclei.len() != 1 {
                    return Err(Error::InvalidTree(format!(
                        "span group `{id}` has {} `span` children",
                        nuclei.len()
                    )));
                }
                self.full(nuclei[0], visited)
            }
            ElemKind::Group(GroupKind::Multinuc) => {
                let nuclei: Vec<usize> = self.children[i]
                    .iter()
                    .filter(|(_, a)| *a == Attachment::MultinucNucleus)
                    .map(|(c, _)| *c)
                    .collect();
                if nuclei.len() < 2 {
                    return Err(Error::InvalidTree(format!(
                        "multinuc group `{id}` has {} nucleus children",
                        nuclei.len()
                    )));
                }
                let mut kids = Vec::with_capacity(nuclei.len());
                for c in nuclei {
                    let node = self.full(c, visited)?;
                    kids.push(with_role(node, Role::Nucleus, self.relname(c)));
                }
                self.ordered(i, kids)
            }
        }
    }

    fn relname(&self, i: usize) -> &str {
        self.elems[i].relname.as_deref().unwrap_or_default()
    }

    fn ordered(&self, i: usize, mut kids: Vec<Node>) -> Result<Node> {
        kids.sort_by_key(|k| k.span().0);
        if kids.windows(2).any(|w| w[0].span().1 + 1 != w[1].span().0) {
            return Err(Error::NonProjectiveSpan(self.elems[i].id.clone()));
        }
        Ok(Node::internal(Role::Root, None, kids))
    }
}

fn with_role(mut node: Node, role: Role, relation: &str) -> Node {
    node.role = role;
    node.relation = Some(relation.to_owned());
    node
}

/// Serialize a tree as `.rs3`. Segment ids are 1..n in EDU order; group ids
/// follow in pre-order.
pub fn write_rs3(tree: &ConstituentTree) -> String {
    let mut w = Writer {
        next_group: tree.edus.len() + 1,
        segments: BTreeMap::new(),
        groups: Vec::new(),
    };
    w.emit(&tree.root, None);

    let mut out = String::new();
    out.push_str("<rst>\n\t<header>\n\t\t<relations>\n");
    for (name, kind) in tree.implied_inventory().iter() {
        let _ = writeln!(
            out,
            "\t\t\t<rel name=\"{}\" type=\"{}\"/>",
            quick_xml::escape::escape(name),
            kind.as_str()
        );
    }
    out.push_str("\t\t</relations>\n\t</header>\n\t<body>\n");
    for edu in &tree.edus {
        let link = w.segments.get(&edu.index).cloned().flatten();
        let _ = writeln!(
            out,
            "\t\t<segment id=\"{}\"{}>{}</segment>",
            edu.index,
            attachment_attrs(&link),
            quick_xml::escape::escape(edu.text.as_str())
        );
    }
    for (id, kind, link) in &w.groups {
        let kind = match kind {
            GroupKind::Span => "span",
            GroupKind::Multinuc => "multinuc",
        };
        let _ = writeln!(
            out,
            "\t\t<group id=\"{id}\" type=\"{kind}\"{}/>",
            attachment_attrs(link)
        );
    }
    out.push_str("\t</body>\n</rst>\n");
    out
}

fn attachment_attrs(link: &Option<(usize, String)>) -> String {
    match link {
        Some((parent, rel)) => format!(
            " parent=\"{parent}\" relname=\"{}\"",
            quick_xml::escape::escape(rel.as_str())
        ),
        None => String::new(),
    }
}

/// Parent group id and relation name.
type Link = Option<(usize, String)>;

struct Writer {
    next_group: usize,
    segments: BTreeMap<usize, Link>,
    groups: Vec<(usize, GroupKind, Link)>,
}

impl Writer {
    /// Emit `node` attached via `link`; returns the id representing it.
    fn emit(&mut self, node: &Node, link: Option<(usize, String)>) -> usize {
        match (&node.body, node.shape()) {
            (NodeBody::Edu(i), _) => {
                self.segments.insert(*i, link);
                *i
            }
            (NodeBody::Children(kids), Some(NodeShape::Multinuclear(label))) => {
                let id = self.group(GroupKind::Multinuc, link);
                for k in kids {
                    self.emit(k, Some((id, label.to_owned())));
                }
                id
            }
            (NodeBody::Children(kids), Some(NodeShape::Mononuclear { nucleus })) => {
                let id = self.group(GroupKind::Span, link);
                let head = self.emit(&kids[nucleus], Some((id, SPAN.to_owned())));
                for (j, k) in kids.iter().enumerate() {
                    if j != nucleus {
                        self.emit(k, Some((head, k.relation().to_owned())));
                    }
                }
                id
            }
            (NodeBody::Children(_), None) => unreachable!("internal nodes always have a shape"),
        }
    }

    fn group(&mut self, kind: GroupKind, link: Option<(usize, String)>) -> usize {
        let id = self.next_group;
        self.next_group += 1;
        self.groups.push((id, kind, link));
        id
    }
}
