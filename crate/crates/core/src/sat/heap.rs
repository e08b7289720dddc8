//! Binary max-heap of variables ordered by activity.

use super::Var;

#[derive(Debug, Default)]
pub struct VarHeap {
    heap: Vec<Var>,
    /// Position of every variable in `heap`, if present.
    index: Vec<Option<usize>>,
}

impl VarHeap {
    pub fn grow(&mut self, num_vars: usize) {
        self.index.resize(num_vars, None);
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index[v as usize].is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn insert(&mut self, v: Var, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.index[v as usize] = Some(self.heap.len());
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    /// Restores the heap order after the activity of `v` grew.
    pub fn increased(&mut self, v: Var, act: &[f64]) {
        if let Some(i) = self.index[v as usize] {
            self.sift_up(i, act);
        }
    }

    pub fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.index[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.index[p as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && act[self.heap[right] as usize] > act[self.heap[left] as usize] {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.index[c as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = Some(i);
    }
}
