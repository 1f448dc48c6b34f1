use super::Labelling;
use crate::error::Result;
use crate::netcore::{NodeId, SocialNetwork};

/// New opinion of agent `i`: flips iff strictly more influencers disagree than agree.
pub fn opinion_change(net: &SocialNetwork, f: &Labelling, i: NodeId) -> Result<bool> {
    f.check_len(net.node_count())?;
    net.check_node(i)?;
    Ok(next_opinion(net, f, i))
}

#[inline]
pub(crate) fn next_opinion(net: &SocialNetwork, f: &Labelling, i: NodeId) -> bool {
    let own = f.get(i);
    let infl = net.influencers_unchecked(i);
    let agree = infl.iter().filter(|&&j| f.get(j) == own).count();
    let disagree = infl.len() - agree;
    own ^ (disagree > agree)
}

/// All agents apply [`opinion_change`] simultaneously against the same pre-state.
pub fn synchronous_update(net: &SocialNetwork, f: &Labelling) -> Result<Labelling> {
    f.check_len(net.node_count())?;
    let mut out = f.clone();
    step_into(net, f, &mut out);
    Ok(out)
}

/// Writes the synchronous successor of `f` into `out`; both must have length n.
pub(crate) fn step_into(net: &SocialNetwork, f: &Labelling, out: &mut Labelling) {
    for i in 0..net.node_count() {
        out.set(i, next_opinion(net, f, i));
    }
}

pub fn is_stable(net: &SocialNetwork, f: &Labelling) -> Result<bool> {
    f.check_len(net.node_count())?;
    Ok((0..net.node_count()).all(|i| next_opinion(net, f, i) == f.get(i)))
}
