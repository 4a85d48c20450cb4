//! In-crate test helpers.

use rand::RngCore;

/// An rng that replays a fixed script of u64 words. `from_uniforms` encodes
/// f64 values in [0, 1) so that `rng.random::<f64>()` yields them exactly.
pub(crate) struct ScriptedRng {
    words: Vec<u64>,
    next: usize,
}

impl ScriptedRng {
    pub(crate) fn from_uniforms(us: &[f64]) -> Self {
        let words = us
            .iter()
            .map(|&u| {
                assert!((0.0..1.0).contains(&u));
                ((u * (1u64 << 53) as f64) as u64) << 11
            })
            .collect();
        Self { words, next: 0 }
    }
}

impl RngCore for ScriptedRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let w = self.words[self.next];
        self.next += 1;
        w
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
