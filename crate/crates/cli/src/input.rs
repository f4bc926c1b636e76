//! Reading documents from files or directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rstkit::treebank::{
    apply_boundaries, load_corpus_with, parse_rs3_with, parse_rsd, Corpus, DepDocument, LoadOptions, Manifest,
    Rs3Options,
};
use rstkit::{binarize_with, depconv::to_dependencies, BinaryTree, Branching, ConstituentTree, Edu};

#[derive(Clone, Debug, Default)]
pub struct ReadOptions {
    pub lenient: bool,
    /// Genre source; defaults to `manifest.tsv` inside an input directory.
    pub manifest: Option<PathBuf>,
    pub jobs: usize,
}

/// Files below `path` with extension `ext`, sorted; a plain file is returned
/// as is.
pub fn files(path: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if !path.is_dir() {
        bail!("{}: no such file or directory", path.display());
    }
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(path).sort_by_file_name() {
        let entry = entry?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == ext) {
            out.push(entry.into_path());
        }
    }
    Ok(out)
}

pub fn stem(path: &Path) -> String {
    path.file_stem().unwrap_or_default().to_string_lossy().into_owned()
}

fn manifest_for(path: &Path, opts: &ReadOptions) -> Result<Option<Manifest>> {
    let p = match &opts.manifest {
        Some(m) => m.clone(),
        None if path.is_dir() => path.join("manifest.tsv"),
        None => return Ok(None),
    };
    if opts.manifest.is_none() && !p.exists() {
        return Ok(None);
    }
    Ok(Some(Manifest::read(&p)?))
}

/// Doc id to genre, from the manifest when there is one.
pub fn genres(path: &Path, opts: &ReadOptions) -> Result<BTreeMap<String, String>> {
    Ok(manifest_for(path, opts)?
        .map(|m| m.entries.into_iter().map(|e| (e.doc_id, e.genre)).collect())
        .unwrap_or_default())
}

/// Run `f` over `items` on up to `jobs` threads, keeping input order.
pub fn par_map<T: Sync, U: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> Result<U> + Sync) -> Result<Vec<U>> {
    if jobs <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Result<Vec<U>>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

pub fn read_tree(path: &Path, opts: &ReadOptions) -> Result<ConstituentTree> {
    let content = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut tree = parse_rs3_with(&content, &stem(path), Rs3Options { lenient: opts.lenient })
        .with_context(|| path.display().to_string())?;
    let bounds = path.with_extension("bounds");
    if bounds.exists() {
        apply_boundaries(&mut tree.edus, &fs::read_to_string(&bounds)?)?;
    }
    Ok(tree)
}

/// All `.rs3` trees under `path` in doc-id order, with genres filled in.
pub fn read_trees(path: &Path, opts: &ReadOptions) -> Result<Vec<ConstituentTree>> {
    let genres = genres(path, opts)?;
    let mut trees = par_map(&files(path, "rs3")?, opts.jobs, |p| read_tree(p, opts))?;
    for t in &mut trees {
        if let Some(g) = genres.get(&t.doc_id) {
            t.genre = g.clone();
        }
    }
    trees.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    if let Some(w) = trees.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
        bail!("document `{}` appears twice", w[0].doc_id);
    }
    Ok(trees)
}

pub fn read_binary(path: &Path, opts: &ReadOptions, branching: Branching) -> Result<Vec<BinaryTree>> {
    Ok(read_trees(path, opts)?
        .iter()
        .map(|t| binarize_with(t, branching))
        .collect())
}

/// Dependency documents from `.rsd` files, or converted from `.rs3` when
/// there are none.
pub fn read_deps(path: &Path, opts: &ReadOptions) -> Result<Vec<DepDocument>> {
    let rsd = files(path, "rsd")?;
    if rsd.is_empty() {
        return Ok(read_binary(path, opts, Branching::Right)?
            .iter()
            .map(to_dependencies)
            .collect());
    }
    let mut docs = par_map(&rsd, opts.jobs, |p| {
        let content = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        parse_rsd(&content, &stem(p)).with_context(|| p.display().to_string())
    })?;
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(docs)
}

/// EDUs of a plain-text document, one per non-blank line.
pub fn read_edu_lines(content: &str) -> Vec<Edu> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| Edu::new(i + 1, l))
        .collect()
}

/// EDU sequences keyed by doc id, from `.rs3` files or, failing those,
/// `.edus` text files.
pub fn read_segmentations(path: &Path, opts: &ReadOptions) -> Result<Vec<(String, Vec<Edu>)>> {
    let edus = files(path, "edus")?;
    if path.is_dir() && files(path, "rs3")?.is_empty() || path.extension().is_some_and(|e| e == "edus") {
        let mut out = Vec::new();
        for p in edus {
            out.push((stem(&p), read_edu_lines(&fs::read_to_string(&p)?)));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(out);
    }
    Ok(read_trees(path, opts)?
        .into_iter()
        .map(|t| (t.doc_id, t.edus))
        .collect())
}

/// A partitioned corpus; the manifest is required.
pub fn read_corpus(path: &Path, opts: &ReadOptions) -> Result<Corpus> {
    let manifest =
        manifest_for(path, opts)?.with_context(|| format!("{}: no manifest.tsv (pass --manifest)", path.display()))?;
    Ok(load_corpus_with(
        path,
        &manifest,
        LoadOptions {
            rs3: Rs3Options { lenient: opts.lenient },
            jobs: opts.jobs.max(1),
        },
    )?)
}

/// Pair documents by id; every gold document needs a prediction.
pub fn pair_up<'a, G, P>(
    gold: &'a [G],
    pred: &'a [P],
    gid: impl Fn(&G) -> &str,
    pid: impl Fn(&P) -> &str,
) -> Result<Vec<(&'a G, &'a P)>> {
    let by_id: BTreeMap<&str, &P> = pred.iter().map(|p| (pid(p), p)).collect();
    let mut out = Vec::with_capacity(gold.len());
    for g in gold {
        match by_id.get(gid(g)) {
            Some(p) => out.push((g, *p)),
            None => bail!("no prediction for document `{}`", gid(g)),
        }
    }
    if by_id.len() > gold.len() {
        log::warn!(
            "{} predicted documents have no gold counterpart",
            by_id.len() - gold.len()
        );
    }
    Ok(out)
}
