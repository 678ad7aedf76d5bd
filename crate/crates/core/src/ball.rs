//! Cayley balls `B_r` by breadth-first search, with word-length tags,
//! geodesic words, product lookup and a checksummed binary cache.
//!
//! Elements are ordered by length, then by canonical key, so `B_{r-1}` is a
//! prefix of `B_r` and the identity sits at index 0.
//!
//! Cache layout (little endian):
//!
//! ```text
//! magic "KZBALL\0\n" | version u32 | descriptor (u32 len + utf8) | radius u32
//! generator count u32 | generator keys | element count u64
//! per element: length tag u32, key | sha256 of all preceding bytes
//! key := u32 count + i64 entries
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::groups::{CanonicalKey, GroupModel};

pub const DEFAULT_CAP: usize = 1_000_000;
const MAGIC: &[u8; 8] = b"KZBALL\0\n";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BallError {
    #[error("ball exceeds the element cap of {cap} (radius {radius})")]
    CapExceeded { cap: usize, radius: usize },
    #[error("not a ball file or unsupported version")]
    Version,
    #[error("ball file checksum mismatch")]
    Checksum,
    #[error("ball file is truncated or malformed")]
    Corrupt,
    #[error("ball file is for model {found}, expected {expected}")]
    ModelMismatch { expected: String, found: String },
    #[error("ball file contents disagree with a fresh enumeration")]
    ContentMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct Ball<E> {
    descriptor: String,
    radius: usize,
    elements: Vec<E>,
    keys: Vec<CanonicalKey>,
    lengths: Vec<usize>,
    /// `(predecessor index, generator index)` on a geodesic.
    parents: Vec<Option<(usize, usize)>>,
    index: HashMap<E, usize>,
}

impl<E> PartialEq for Ball<E> {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
            && self.radius == other.radius
            && self.keys == other.keys
            && self.lengths == other.lengths
    }
}

impl<E: Clone + Eq + std::hash::Hash> Ball<E> {
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn length_of(&self, e: &E) -> Option<usize> {
        self.index_of(e).map(|i| self.lengths[i])
    }

    /// Number of elements of length at most `r`.
    pub fn prefix_len(&self, r: usize) -> usize {
        self.lengths.partition_point(|&l| l <= r)
    }

    /// A geodesic word for element `i`, as generator indices.
    pub fn geodesic(&self, i: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.lengths[i]);
        let mut cur = i;
        while let Some((pred, gen)) = self.parents[cur] {
            word.push(gen);
            cur = pred;
        }
        word.reverse();
        word
    }

    /// Index in `extended` of `elements[i]^{-1} elements[j]`.
    ///
    /// Panics when the product is outside `extended`, which cannot happen
    /// when `extended.radius() >= 2 * self.radius()`.
    pub fn product_index<M: GroupModel<Element = E>>(
        &self,
        model: &M,
        i: usize,
        j: usize,
        extended: &Ball<E>,
    ) -> usize {
        let p = model.multiply(&model.invert(&self.elements[i]), &self.elements[j]);
        extended.index_of(&p).expect("product lies outside the extended ball")
    }
}

/// Elements of word length at most `radius`, ordered by (length, key).
pub fn enumerate_ball<M: GroupModel>(
    model: &M,
    radius: usize,
    cap: usize,
) -> Result<Ball<M::Element>, BallError> {
    let e = model.identity();
    let mut ball = Ball {
        descriptor: model.descriptor(),
        radius,
        elements: vec![e.clone()],
        keys: vec![model.key(&e)],
        lengths: vec![0],
        parents: vec![None],
        index: HashMap::from([(e, 0)]),
    };
    let mut layer_start = 0;
    for r in 1..=radius {
        let layer_end = ball.elements.len();
        let mut fresh: HashMap<M::Element, (usize, usize)> = HashMap::new();
        for i in layer_start..layer_end {
            for (k, s) in model.generators().iter().enumerate() {
                let p = model.multiply(&ball.elements[i], s);
                if !ball.index.contains_key(&p) {
                    fresh.entry(p).or_insert((i, k));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        if ball.elements.len() + fresh.len() > cap {
            return Err(BallError::CapExceeded { cap, radius });
        }
        let mut layer: Vec<_> =
            fresh.into_iter().map(|(g, parent)| (model.key(&g), g, parent)).collect();
        layer.sort_by(|a, b| a.0.cmp(&b.0));
        for (key, g, parent) in layer {
            ball.index.insert(g.clone(), ball.elements.len());
            ball.elements.push(g);
            ball.keys.push(key);
            ball.lengths.push(r);
            ball.parents.push(Some(parent));
        }
        layer_start = layer_end;
    }
    Ok(ball)
}

fn put_key(buf: &mut Vec<u8>, key: &CanonicalKey) {
    buf.extend_from_slice(&key.to_bytes());
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

pub fn ball_to_bytes<M: GroupModel>(model: &M, ball: &Ball<M::Element>) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    put_str(&mut buf, &ball.descriptor);
    buf.extend_from_slice(&(ball.radius as u32).to_le_bytes());
    buf.extend_from_slice(&(model.generators().len() as u32).to_le_bytes());
    for g in model.generators() {
        put_key(&mut buf, &model.key(g));
    }
    buf.extend_from_slice(&(ball.len() as u64).to_le_bytes());
    for (key, &len) in ball.keys.iter().zip(&ball.lengths) {
        buf.extend_from_slice(&(len as u32).to_le_bytes());
        put_key(&mut buf, key);
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn save_ball<M: GroupModel>(
    model: &M,
    ball: &Ball<M::Element>,
    path: &Path,
) -> Result<(), BallError> {
    fs::write(path, ball_to_bytes(model, ball))?;
    Ok(())
}

/// The contents of a ball file, without group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallFile {
    pub descriptor: String,
    pub radius: usize,
    pub generator_keys: Vec<CanonicalKey>,
    pub lengths: Vec<usize>,
    pub keys: Vec<CanonicalKey>,
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], BallError> {
        let end = self.pos.checked_add(n).ok_or(BallError::Corrupt)?;
        let out = self.data.get(self.pos..end).ok_or(BallError::Corrupt)?;
        self.pos = end;
        Ok(out)
    }
    fn u32(&mut self) -> Result<u32, BallError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, BallError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn key(&mut self) -> Result<CanonicalKey, BallError> {
        let n = self.u32()? as usize;
        let raw = self.take(n.checked_mul(8).ok_or(BallError::Corrupt)?)?;
        Ok(CanonicalKey(
            raw.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect(),
        ))
    }
}

pub fn parse_ball_bytes(data: &[u8]) -> Result<BallFile, BallError> {
    if data.len() < MAGIC.len() + 4 || &data[..MAGIC.len()] != MAGIC {
        return Err(BallError::Version);
    }
    if u32::from_le_bytes(data[8..12].try_into().unwrap()) != VERSION {
        return Err(BallError::Version);
    }
    if data.len() < 12 + 32 {
        return Err(BallError::Corrupt);
    }
    let (body, digest) = data.split_at(data.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(BallError::Checksum);
    }
    let mut r = Reader { data: body, pos: 12 };
    let dlen = r.u32()? as usize;
    let descriptor = String::from_utf8(r.take(dlen)?.to_vec()).map_err(|_| BallError::Corrupt)?;
    let radius = r.u32()? as usize;
    let gcount = r.u32()? as usize;
    let generator_keys = (0..gcount).map(|_| r.key()).collect::<Result<_, _>>()?;
    let count = r.u64()? as usize;
    let mut lengths = Vec::new();
    let mut keys = Vec::new();
    for _ in 0..count {
        lengths.push(r.u32()? as usize);
        keys.push(r.key()?);
    }
    if r.pos != body.len() {
        return Err(BallError::Corrupt);
    }
    Ok(BallFile { descriptor, radius, generator_keys, lengths, keys })
}

/// Loads a cached ball. Group elements are rebuilt by enumeration under
/// `model` and must reproduce the stored keys and lengths exactly.
pub fn load_ball<M: GroupModel>(model: &M, path: &Path) -> Result<Ball<M::Element>, BallError> {
    let file = parse_ball_bytes(&fs::read(path)?)?;
    if file.descriptor != model.descriptor() {
        return Err(BallError::ModelMismatch { expected: model.descriptor(), found: file.descriptor });
    }
    let gens: Vec<_> = model.generators().iter().map(|g| model.key(g)).collect();
    if gens != file.generator_keys {
        return Err(BallError::ContentMismatch);
    }
    let ball = match enumerate_ball(model, file.radius, file.keys.len()) {
        Ok(b) => b,
        Err(BallError::CapExceeded { .. }) => return Err(BallError::ContentMismatch),
        Err(e) => return Err(e),
    };
    if ball.keys != file.keys || ball.lengths != file.lengths {
        return Err(BallError::ContentMismatch);
    }
    Ok(ball)
}

/// Cache file name for `(model, radius)` inside `dir`.
pub fn cache_path(dir: &Path, descriptor: &str, radius: usize) -> PathBuf {
    let safe: String =
        descriptor.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{safe}-r{radius}.ball"))
}

/// Loads from `cache_dir` when a valid file exists, otherwise enumerates and
/// writes the cache. Returns the ball and whether it came from the cache.
pub fn enumerate_cached<M: GroupModel>(
    model: &M,
    radius: usize,
    cap: usize,
    cache_dir: Option<&Path>,
) -> Result<(Ball<M::Element>, bool), BallError> {
    let Some(dir) = cache_dir else {
        return Ok((enumerate_ball(model, radius, cap)?, false));
    };
    let path = cache_path(dir, &model.descriptor(), radius);
    if path.exists() {
        if let Ok(ball) = load_ball(model, &path) {
            return Ok((ball, true));
        }
    }
    let ball = enumerate_ball(model, radius, cap)?;
    fs::create_dir_all(dir)?;
    save_ball(model, &ball, &path)?;
    Ok((ball, false))
}
