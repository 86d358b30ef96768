//! Fixture knowledge base: entities, type graph, demonyms, anchor-text link
//! frequencies and Wikipedia title mappings.
//!
//! On disk the KB is a directory of small UTF-8 files:
//!
//! | file | row format |
//! |------|------------|
//! | `entities.jsonl` | `{"id":"Q..","name":..,"aliases":[..],"instance_of":["Q.."],"sitelinks":n}` |
//! | `subclass_edges.tsv` | `child-id \t parent-id` |
//! | `type_whitelist.tsv` | `type-id \t label` (order drives result column order) |
//! | `demonyms.txt` | one demonym per line |
//! | `link_frequencies.tsv` | `anchor text \t entity-id \t count` |
//! | `wikipedia_mappings.tsv` | `title \t entity-id` |
//! | `redirects.tsv` (optional) | `from-title \t to-title` |

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fs;
use std::path::Path;

use percent_encoding::percent_decode_str;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EntityId, EntityRef};

pub const ENTITIES_FILE: &str = "entities.jsonl";
pub const SUBCLASS_FILE: &str = "subclass_edges.tsv";
pub const WHITELIST_FILE: &str = "type_whitelist.tsv";
pub const DEMONYMS_FILE: &str = "demonyms.txt";
pub const LINK_FREQUENCIES_FILE: &str = "link_frequencies.tsv";
pub const MAPPINGS_FILE: &str = "wikipedia_mappings.tsv";
pub const REDIRECTS_FILE: &str = "redirects.tsv";

pub const DEFAULT_TYPE_DEPTH_CAP: usize = 20;
pub const DEFAULT_REDIRECT_HOP_LIMIT: usize = 10;

/// Markers that explicitly denote an entity outside the KB.
const NIL_MARKERS: &[&str] = &["NIL", "--NME--"];

/// The default per-type evaluation whitelist.
pub const DEFAULT_TYPE_WHITELIST: &[(u64, &str)] = &[
    (215627, "person"),
    (17334923, "location"),
    (43229, "organization"),
    (17376908, "languoid"),
    (16521, "taxon"),
    (431289, "brand"),
    (618779, "award"),
    (1656682, "event"),
    (43460564, "chemical entity"),
    (28640, "profession"),
    (349, "sport"),
    (1075, "color"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbEntity {
    pub id: EntityId,
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default)]
    pub instance_of: Vec<EntityId>,
    #[serde(rename = "sitelinks", default)]
    pub sitelink_count: u64,
}

impl KbEntity {
    pub fn new(id: EntityId, name: impl Into<String>) -> Self {
        KbEntity {
            id,
            name: name.into(),
            aliases: Vec::new(),
            instance_of: Vec::new(),
            sitelink_count: 0,
        }
    }

    /// The display name followed by every alias.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str()).chain(self.aliases.iter().map(String::as_str))
    }
}

/// The raw KB tables, as stored on disk.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbData {
    pub entities: Vec<KbEntity>,
    pub subclass_edges: Vec<(EntityId, EntityId)>,
    pub whitelist: Vec<(EntityId, String)>,
    pub demonyms: Vec<String>,
    pub link_frequencies: Vec<(String, EntityId, u64)>,
    pub wikipedia_titles: Vec<(String, EntityId)>,
    pub redirects: Vec<(String, String)>,
}

impl KbData {
    pub fn with_default_whitelist() -> Self {
        KbData {
            whitelist: DEFAULT_TYPE_WHITELIST
                .iter()
                .map(|(id, label)| (EntityId::new(*id), label.to_string()))
                .collect(),
            ..KbData::default()
        }
    }

    /// Writes the tables in the fixture directory format.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut entities = String::new();
        for entity in &self.entities {
            entities.push_str(&serde_json::to_string(entity).expect("entity serializes"));
            entities.push('\n');
        }
        let tsv = |rows: Vec<String>| rows.into_iter().map(|r| r + "\n").collect::<String>();
        let files = [
            (ENTITIES_FILE, entities),
            (
                SUBCLASS_FILE,
                tsv(self.subclass_edges.iter().map(|(c, p)| format!("{c}\t{p}")).collect()),
            ),
            (
                WHITELIST_FILE,
                tsv(self.whitelist.iter().map(|(t, l)| format!("{t}\t{l}")).collect()),
            ),
            (DEMONYMS_FILE, tsv(self.demonyms.clone())),
            (
                LINK_FREQUENCIES_FILE,
                tsv(self
                    .link_frequencies
                    .iter()
                    .map(|(a, e, c)| format!("{a}\t{e}\t{c}"))
                    .collect()),
            ),
            (
                MAPPINGS_FILE,
                tsv(self.wikipedia_titles.iter().map(|(t, e)| format!("{t}\t{e}")).collect()),
            ),
            (
                REDIRECTS_FILE,
                tsv(self.redirects.iter().map(|(f, t)| format!("{f}\t{t}")).collect()),
            ),
        ];
        for (name, content) in files {
            let path = dir.join(name);
            fs::write(&path, content).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }
}

/// Loaded, indexed and read-only knowledge base.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    entities: HashMap<EntityId, KbEntity>,
    name_index: HashMap<String, BTreeSet<EntityId>>,
    subclass_edges: HashMap<EntityId, Vec<EntityId>>,
    whitelist: Vec<(EntityId, String)>,
    whitelist_ids: HashSet<EntityId>,
    demonyms: HashSet<String>,
    link_frequencies: HashMap<String, BTreeMap<EntityId, u64>>,
    titles: HashMap<String, EntityId>,
    redirects: HashMap<String, String>,
    warnings: Vec<String>,
    type_depth_cap: usize,
    redirect_hop_limit: usize,
}

impl KnowledgeBase {
    /// Indexes raw tables. Dangling ids are recorded as warnings.
    pub fn from_data(data: KbData) -> Result<Self> {
        let mut warnings = Vec::new();
        let mut entities = HashMap::with_capacity(data.entities.len());
        let mut name_index: HashMap<String, BTreeSet<EntityId>> = HashMap::new();
        for entity in data.entities {
            if entity.name.is_empty() {
                return Err(Error::invalid(format!("entity {} has an empty name", entity.id)));
            }
            for name in entity.names() {
                name_index.entry(name.to_string()).or_default().insert(entity.id);
            }
            if let Some(previous) = entities.insert(entity.id, entity) {
                return Err(Error::invalid(format!("duplicate entity id {}", previous.id)));
            }
        }

        let mut missing = |id: &EntityId, what: &str| {
            if !entities.contains_key(id) {
                warnings.push(format!("{what} references {id}, which is not in the entity table"));
            }
        };
        for entity in entities.values() {
            for t in &entity.instance_of {
                missing(t, &format!("instance_of of {}", entity.id));
            }
        }
        let mut whitelist_ids = HashSet::new();
        for (id, _) in &data.whitelist {
            if !whitelist_ids.insert(*id) {
                return Err(Error::invalid(format!("duplicate whitelist type {id}")));
            }
            missing(id, "type whitelist");
        }
        let mut link_frequencies: HashMap<String, BTreeMap<EntityId, u64>> = HashMap::new();
        for (anchor, id, count) in data.link_frequencies {
            missing(&id, &format!("link frequency for `{anchor}`"));
            *link_frequencies.entry(anchor).or_default().entry(id).or_default() += count;
        }
        let mut titles = HashMap::new();
        for (title, id) in data.wikipedia_titles {
            missing(&id, &format!("Wikipedia title `{title}`"));
            titles.insert(title, id);
        }
        let mut subclass_edges: HashMap<EntityId, Vec<EntityId>> = HashMap::new();
        for (child, parent) in data.subclass_edges {
            subclass_edges.entry(child).or_default().push(parent);
        }
        // Entities are a HashMap, so sort the warnings for stable output.
        warnings.sort();
        warnings.dedup();

        Ok(KnowledgeBase {
            entities,
            name_index,
            subclass_edges,
            whitelist: data.whitelist,
            whitelist_ids,
            demonyms: data.demonyms.into_iter().collect(),
            link_frequencies,
            titles,
            redirects: data.redirects.into_iter().collect(),
            warnings,
            type_depth_cap: DEFAULT_TYPE_DEPTH_CAP,
            redirect_hop_limit: DEFAULT_REDIRECT_HOP_LIMIT,
        })
    }

    pub fn with_type_depth_cap(mut self, cap: usize) -> Self {
        self.type_depth_cap = cap;
        self
    }

    pub fn with_redirect_hop_limit(mut self, limit: usize) -> Self {
        self.redirect_hop_limit = limit;
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity(&self, id: EntityId) -> Option<&KbEntity> {
        self.entities.get(&id)
    }

    pub fn name(&self, id: EntityId) -> Option<&str> {
        self.entities.get(&id).map(|e| e.name.as_str())
    }

    pub fn whitelist(&self) -> &[(EntityId, String)] {
        &self.whitelist
    }

    /// Looks up a whitelist type by its human label, case-insensitively.
    pub fn type_with_label(&self, label: &str) -> Option<EntityId> {
        self.whitelist
            .iter()
            .find(|(_, l)| l.eq_ignore_ascii_case(label))
            .map(|(id, _)| *id)
    }

    pub fn is_demonym(&self, text: &str) -> bool {
        self.demonyms.contains(text)
    }

    /// Sitelink count, 0 for ids outside the KB.
    pub fn popularity(&self, id: EntityId) -> u64 {
        self.entities.get(&id).map_or(0, |e| e.sitelink_count)
    }

    /// How often `anchor` links to `id`; 0 when never.
    pub fn link_count(&self, anchor: &str, id: EntityId) -> u64 {
        self.link_frequencies
            .get(anchor)
            .and_then(|m| m.get(&id))
            .copied()
            .unwrap_or(0)
    }

    /// Entities whose name or alias equals `mention`, plus entities that
    /// `mention` has been used as anchor text for. Case-sensitive.
    pub fn candidates_for_mention(&self, mention: &str) -> BTreeSet<EntityId> {
        let mut candidates = BTreeSet::new();
        if mention.is_empty() {
            return candidates;
        }
        if let Some(ids) = self.name_index.get(mention) {
            candidates.extend(ids.iter().copied());
        }
        if let Some(links) = self.link_frequencies.get(mention) {
            candidates.extend(links.iter().filter(|(_, &c)| c >= 1).map(|(id, _)| *id));
        }
        candidates
    }

    /// Whitelist types reachable from `id` by one `instance of` edge followed
    /// by any number of `subclass of` edges (bounded by the depth cap).
    /// Returned in whitelist order; empty for unknown ids.
    pub fn entity_types(&self, id: EntityId) -> Vec<EntityId> {
        let Some(entity) = self.entities.get(&id) else {
            return Vec::new();
        };
        let mut visited: HashSet<EntityId> = HashSet::new();
        let mut queue: VecDeque<(EntityId, usize)> = VecDeque::new();
        for &t in &entity.instance_of {
            if visited.insert(t) {
                queue.push_back((t, 0));
            }
        }
        let mut found = HashSet::new();
        while let Some((node, depth)) = queue.pop_front() {
            if self.whitelist_ids.contains(&node) {
                found.insert(node);
            }
            if depth == self.type_depth_cap {
                continue;
            }
            for &parent in self.subclass_edges.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
                if visited.insert(parent) {
                    queue.push_back((parent, depth + 1));
                }
            }
        }
        self.whitelist
            .iter()
            .map(|(t, _)| *t)
            .filter(|t| found.contains(t))
            .collect()
    }

    /// Whether `id` carries the whitelist type `type_id`.
    pub fn has_type(&self, id: EntityId, type_id: EntityId) -> bool {
        self.entity_types(id).contains(&type_id)
    }

    /// Normalizes a Wikidata, Wikipedia or DBpedia reference to an
    /// [`EntityRef`]. Anything unresolvable becomes `Unknown(raw)`.
    pub fn resolve_reference(&self, raw: &str) -> EntityRef {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return EntityRef::Unknown(None);
        }
        let unknown = || EntityRef::Unknown(Some(raw.to_string()));
        if NIL_MARKERS.contains(&trimmed) {
            return unknown();
        }
        if let Some(id) = parse_wikidata_reference(trimmed) {
            return EntityRef::Known(id);
        }
        let title = wiki_title(trimmed).unwrap_or(trimmed);
        match self.resolve_title(&normalize_title(title)) {
            Some(id) => EntityRef::Known(id),
            None => unknown(),
        }
    }

    /// Maps a normalized Wikipedia title to an entity, following redirects.
    pub fn resolve_title(&self, title: &str) -> Option<EntityId> {
        let mut current = match self.lookup_key(&self.redirects, title) {
            Some(target) => target.clone(),
            None => title.to_string(),
        };
        if current != title {
            let mut seen = HashSet::from([title.to_string()]);
            let mut hops = 1;
            loop {
                if !seen.insert(current.clone()) {
                    log::warn!("redirect cycle while resolving `{title}`");
                    return None;
                }
                let Some(next) = self.lookup_key(&self.redirects, &current) else {
                    break;
                };
                if hops == self.redirect_hop_limit {
                    log::warn!("redirect chain for `{title}` exceeds {} hops", self.redirect_hop_limit);
                    return None;
                }
                current = next.to_string();
                hops += 1;
            }
        }
        self.lookup_key(&self.titles, &current).copied()
    }

    /// Exact lookup, then with the first letter upper-cased (Wikipedia titles
    /// are case-insensitive in their first character).
    fn lookup_key<'a, V>(&self, map: &'a HashMap<String, V>, title: &str) -> Option<&'a V> {
        map.get(title).or_else(|| {
            let mut chars = title.chars();
            let first = chars.next()?;
            if first.is_uppercase() {
                return None;
            }
            let capitalized: String = first.to_uppercase().chain(chars).collect();
            map.get(&capitalized)
        })
    }
}

fn parse_wikidata_reference(s: &str) -> Option<EntityId> {
    if let Ok(id) = s.parse() {
        return Some(id);
    }
    let rest = s
        .strip_prefix("https://")
        .or_else(|| s.strip_prefix("http://"))?;
    let rest = rest
        .strip_prefix("www.wikidata.org/entity/")
        .or_else(|| rest.strip_prefix("www.wikidata.org/wiki/"))
        .or_else(|| rest.strip_prefix("wikidata.org/entity/"))
        .or_else(|| rest.strip_prefix("wikidata.org/wiki/"))?;
    rest.parse().ok()
}

/// Extracts the raw title from a Wikipedia or DBpedia resource URL.
fn wiki_title(s: &str) -> Option<&str> {
    let rest = s
        .strip_prefix("https://")
        .or_else(|| s.strip_prefix("http://"))?;
    let (host, path) = rest.split_once('/')?;
    let title = if host.ends_with("wikipedia.org") {
        path.strip_prefix("wiki/")?
    } else if host == "dbpedia.org" || host.ends_with(".dbpedia.org") {
        path.strip_prefix("resource/")?
    } else {
        return None;
    };
    Some(title.split('#').next().unwrap_or(title))
}

/// Percent-decodes and maps underscores to spaces.
pub fn normalize_title(title: &str) -> String {
    let decoded = percent_decode_str(title).decode_utf8_lossy();
    decoded.replace('_', " ").trim().to_string()
}

/// Loads a fixture KB directory. Every table except `redirects.tsv` is
/// required.
pub fn load_kb(dir: &Path) -> Result<KnowledgeBase> {
    KnowledgeBase::from_data(read_kb_data(dir)?)
}

pub fn read_kb_data(dir: &Path) -> Result<KbData> {
    let read = |name: &str, required: bool| -> Result<Option<String>> {
        let path = dir.join(name);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                if required {
                    Err(Error::MissingKbFile {
                        file: path.display().to_string(),
                    })
                } else {
                    Ok(None)
                }
            }
            Err(e) => Err(Error::io(path, e)),
        }
    };
    let entities_src = read(ENTITIES_FILE, true)?.unwrap_or_default();
    let subclass_src = read(SUBCLASS_FILE, true)?.unwrap_or_default();
    let whitelist_src = read(WHITELIST_FILE, true)?.unwrap_or_default();
    let demonyms_src = read(DEMONYMS_FILE, true)?.unwrap_or_default();
    let links_src = read(LINK_FREQUENCIES_FILE, true)?.unwrap_or_default();
    let mappings_src = read(MAPPINGS_FILE, true)?.unwrap_or_default();
    let redirects_src = read(REDIRECTS_FILE, false)?.unwrap_or_default();

    let mut data = KbData::default();
    for (line_no, line) in numbered_rows(&entities_src) {
        let entity: KbEntity = serde_json::from_str(line).map_err(|e| malformed(ENTITIES_FILE, line_no, e))?;
        data.entities.push(entity);
    }
    for (line_no, line) in numbered_rows(&subclass_src) {
        let [child, parent] = columns::<2>(SUBCLASS_FILE, line_no, line)?;
        data.subclass_edges.push((
            entity_column(SUBCLASS_FILE, line_no, child)?,
            entity_column(SUBCLASS_FILE, line_no, parent)?,
        ));
    }
    for (line_no, line) in numbered_rows(&whitelist_src) {
        let [id, label] = columns::<2>(WHITELIST_FILE, line_no, line)?;
        data.whitelist
            .push((entity_column(WHITELIST_FILE, line_no, id)?, label.to_string()));
    }
    data.demonyms = numbered_rows(&demonyms_src).map(|(_, l)| l.to_string()).collect();
    for (line_no, line) in numbered_rows(&links_src) {
        let [anchor, id, count] = columns::<3>(LINK_FREQUENCIES_FILE, line_no, line)?;
        let count: u64 = count
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| malformed(LINK_FREQUENCIES_FILE, line_no, format!("count `{count}` is not a positive integer")))?;
        data.link_frequencies.push((
            anchor.to_string(),
            entity_column(LINK_FREQUENCIES_FILE, line_no, id)?,
            count,
        ));
    }
    for (line_no, line) in numbered_rows(&mappings_src) {
        let [title, id] = columns::<2>(MAPPINGS_FILE, line_no, line)?;
        data.wikipedia_titles
            .push((title.to_string(), entity_column(MAPPINGS_FILE, line_no, id)?));
    }
    for (line_no, line) in numbered_rows(&redirects_src) {
        let [from, to] = columns::<2>(REDIRECTS_FILE, line_no, line)?;
        data.redirects.push((from.to_string(), to.to_string()));
    }
    Ok(data)
}

fn numbered_rows(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn columns<'a, const N: usize>(file: &str, line_no: usize, line: &'a str) -> Result<[&'a str; N]> {
    let parts: Vec<&str> = line.split('\t').collect();
    parts.try_into().map_err(|parts: Vec<&str>| {
        malformed(file, line_no, format!("expected {N} tab-separated columns, found {}", parts.len()))
    })
}

fn entity_column(file: &str, line_no: usize, value: &str) -> Result<EntityId> {
    value.parse().map_err(|e| malformed(file, line_no, e))
}

fn malformed(file: &str, line: usize, message: impl ToString) -> Error {
    Error::MalformedRow {
        file: file.to_string(),
        line,
        message: message.to_string(),
    }
}
