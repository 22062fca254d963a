use super::{PatternInstance, TemplateId};
use crate::text::POSSESSIVES;
use crate::text::{Chunk, ChunkKind, ParsedSentence, Pos, Token, Voice};

/// Prepositions that may attach to the verb as a particle ("turn in", "got off").
const PARTICLES: &[&str] = &["up", "off", "out", "in", "down", "back", "over", "away", "on", "around"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum VpKind {
    Act,
    Pass,
    Inf,
    Aux,
}

fn vp_kind(tokens: &[Token], c: &Chunk) -> VpKind {
    match c.voice {
        Voice::Infinitive => VpKind::Inf,
        Voice::Passive => VpKind::Pass,
        _ if tokens[c.head].pos == Pos::Aux => VpKind::Aux,
        _ => VpKind::Act,
    }
}

fn upper(t: &Token) -> String {
    t.norm.to_uppercase()
}

struct View<'a> {
    tokens: &'a [Token],
    chunks: &'a [Chunk],
}

impl<'a> View<'a> {
    fn starting_at(&self, kind: ChunkKind, start: usize) -> Option<&'a Chunk> {
        self.chunks.iter().find(|c| c.kind == kind && c.start == start)
    }

    fn ending_at(&self, kind: ChunkKind, end: usize) -> Option<&'a Chunk> {
        self.chunks.iter().find(|c| c.kind == kind && c.end == end)
    }

    fn verb_anchor(&self, vp: &Chunk) -> String {
        let head = upper(&self.tokens[vp.head]);
        if vp.negated {
            format!("NOT_{head}")
        } else {
            head
        }
    }

    /// A particle-list word at `i`; unless `allow_pp`, it must not itself open a PP.
    fn particle_at(&self, i: usize, allow_pp: bool) -> Option<usize> {
        let t = self.tokens.get(i)?;
        if !matches!(t.pos, Pos::Prep | Pos::Adv) || !PARTICLES.contains(&t.norm.as_str()) {
            return None;
        }
        if t.pos == Pos::Prep && !allow_pp && self.starting_at(ChunkKind::Pp, i).is_some() {
            return None;
        }
        Some(i)
    }

    /// NP ending right before the VP, skipping adverbs in between.
    fn subject(&self, vp: &Chunk) -> Option<&'a Chunk> {
        let mut end = vp.start;
        while end > 0 && self.tokens[end - 1].pos == Pos::Adv {
            end -= 1;
        }
        self.ending_at(ChunkKind::Np, end)
    }

    /// NP directly after the VP, optionally after a particle which is returned too.
    fn dobj(&self, vp: &Chunk) -> Option<(Option<usize>, &'a Chunk)> {
        if let Some(np) = self.starting_at(ChunkKind::Np, vp.end) {
            return Some((None, np));
        }
        let p = self.particle_at(vp.end, true)?;
        self.starting_at(ChunkKind::Np, p + 1).map(|np| (Some(p), np))
    }

    /// PP after `end`, allowing an intervening object NP (when `skip_np`) and particle.
    fn pp_after(&self, mut end: usize, skip_np: bool) -> Option<&'a Chunk> {
        if let Some(pp) = self.starting_at(ChunkKind::Pp, end) {
            return Some(pp);
        }
        if skip_np {
            if let Some(np) = self.starting_at(ChunkKind::Np, end) {
                end = np.end;
                if let Some(pp) = self.starting_at(ChunkKind::Pp, end) {
                    return Some(pp);
                }
            }
        }
        let p = self.particle_at(end, false)?;
        self.starting_at(ChunkKind::Pp, p + 1)
    }

    fn with_particle(&self, mut anchors: Vec<String>, particle: Option<usize>) -> Vec<String> {
        if let Some(p) = particle {
            anchors.push(upper(&self.tokens[p]));
        }
        anchors
    }
}

fn emit(out: &mut Vec<PatternInstance>, id: u8, anchors: Vec<String>) {
    let template = TemplateId::new(id).expect("template id in range");
    out.push(PatternInstance {
        template,
        anchors,
        slot: template.slot(),
    });
}

/// All template instantiations in a sentence, in token order per template pass.
pub fn instantiate(sentence: &ParsedSentence) -> Vec<PatternInstance> {
    let view = View {
        tokens: &sentence.tokens,
        chunks: &sentence.chunks,
    };
    let tokens = view.tokens;
    let mut out = Vec::new();
    let vps: Vec<&Chunk> = sentence.chunks_of(ChunkKind::Vp).collect();

    for (k, vp) in vps.iter().enumerate() {
        let kind = vp_kind(tokens, vp);
        let verb = view.verb_anchor(vp);
        let next_inf = vps
            .get(k + 1)
            .filter(|w| w.start == vp.end && vp_kind(tokens, w) == VpKind::Inf);
        let dobj = view.dobj(vp);
        match kind {
            VpKind::Pass => {
                emit(&mut out, 1, vec![verb.clone()]);
                if let Some(w) = next_inf {
                    emit(&mut out, 5, vec![verb.clone(), view.verb_anchor(w)]);
                }
                if let Some(pp) = view.pp_after(vp.end, true) {
                    emit(&mut out, 14, vec![verb.clone(), upper(&tokens[pp.head])]);
                }
            }
            VpKind::Act => {
                emit(&mut out, 2, vec![verb.clone()]);
                if let Some((particle, np)) = dobj {
                    let obj = view.with_particle(vec![verb.clone()], particle);
                    let mut with_head = obj.clone();
                    with_head.push(upper(&tokens[np.head]));
                    emit(&mut out, 3, with_head);
                    emit(&mut out, 8, obj);
                }
                if let Some(w) = next_inf {
                    let inf = view.verb_anchor(w);
                    emit(&mut out, 4, vec![verb.clone(), inf.clone()]);
                    if let Some((particle, _)) = view.dobj(w) {
                        emit(&mut out, 10, view.with_particle(vec![verb.clone(), inf], particle));
                    }
                }
                if let Some(pp) = view.pp_after(vp.end, true) {
                    emit(&mut out, 13, vec![verb.clone(), upper(&tokens[pp.head])]);
                }
            }
            VpKind::Inf => {
                if let Some((particle, _)) = dobj {
                    emit(&mut out, 9, view.with_particle(vec![verb.clone()], particle));
                }
                if let Some(pp) = view.pp_after(vp.end, true) {
                    emit(&mut out, 15, vec![verb.clone(), upper(&tokens[pp.head])]);
                }
            }
            VpKind::Aux => {
                if let Some((_, np)) = dobj {
                    emit(&mut out, 6, vec![verb.clone(), upper(&tokens[np.head])]);
                    if let Some(subj) = view.subject(vp) {
                        emit(&mut out, 11, vec![upper(&tokens[subj.head]), verb.clone()]);
                    }
                }
                let mut j = vp.end;
                while j < tokens.len() && tokens[j].pos == Pos::Adv {
                    j += 1;
                }
                if tokens.get(j).is_some_and(|t| t.pos == Pos::Adj) {
                    emit(&mut out, 7, vec![verb.clone(), upper(&tokens[j])]);
                }
            }
        }
    }

    for np in sentence.chunks_of(ChunkKind::Np) {
        if let Some(pp) = view.pp_after(np.end, false) {
            emit(&mut out, 12, vec![upper(&tokens[np.head]), upper(&tokens[pp.head])]);
        }
        let possessed = tokens[np.span()]
            .iter()
            .any(|t| t.pos == Pos::Det && POSSESSIVES.contains(&t.norm.as_str()));
        if possessed {
            emit(&mut out, 16, vec![upper(&tokens[np.head])]);
        }
    }
    out
}
