//! Run state and the per-iteration driver.

use crate::cov::{
    differential_operator, elite_select, estimate, gaussian_operator, shift_operator, ArchiveEntry,
    CovModel, EliteArchive,
};
use crate::eco::{
    closest, high_school_move, high_student_move, mean_of, middle_school_move, middle_student_move,
    primary_school_move, primary_student_move, school_count, stage_of, Agent, AlgorithmParams,
    PopulationStats, SchoolRule, Stage, StageContext,
};
use crate::error::{Error, Result};
use crate::rng::{clamp_in_place, init_population, levy_sigma, levy_with_sigma, Bounds, ChaosInitConfig, Draws, RngStream};

/// Outcome of evaluating one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Scalar fitness used for selection (lower is better).
    pub fitness: f64,
    pub feasible: bool,
    /// Objective calls consumed; at least 1.
    pub evaluations: usize,
}

/// A minimization problem as seen by the optimizer.
pub trait Objective: Sync {
    fn bounds(&self) -> &Bounds;

    /// Evaluates `x`. Constraint handlers may replace `x` with another in-bounds
    /// point and spend up to `budget` evaluations doing so.
    fn evaluate(&self, x: &mut Vec<f64>, rng: &mut RngStream, budget: usize) -> Evaluation;
}

/// Unconstrained objective backed by a closure.
pub struct FnObjective<F> {
    bounds: Bounds,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(bounds: Bounds, f: F) -> Self {
        Self { bounds, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &mut Vec<f64>, _rng: &mut RngStream, _budget: usize) -> Evaluation {
        Evaluation {
            fitness: (self.f)(x),
            feasible: true,
            evaluations: 1,
        }
    }
}

/// Minimum archive size before covariance operators replace the stage's ECO school update.
pub fn archive_threshold(dim: usize) -> usize {
    2usize.max(dim / 2 + 1)
}

/// One optimizer run: population, elite archive, counters and random stream.
pub struct Optimizer<'a, O: Objective + ?Sized> {
    objective: &'a O,
    params: AlgorithmParams,
    population: Vec<Agent>,
    archive: EliteArchive,
    rng: RngStream,
    fes: usize,
    fes_max: usize,
    iteration: usize,
    levy_sigma: f64,
    best: Agent,
}

impl<'a, O: Objective + ?Sized> Optimizer<'a, O> {
    /// Chaotic initialization followed by one evaluation per agent.
    pub fn new(
        objective: &'a O,
        params: AlgorithmParams,
        n: usize,
        fes_max: usize,
        mut rng: RngStream,
    ) -> Result<Self> {
        params.validate()?;
        if fes_max < n {
            return Err(Error::BudgetExceeded { fes: n, fes_max });
        }
        let bounds = objective.bounds();
        let positions = init_population(&ChaosInitConfig::new(n), bounds, &mut rng)?;
        let mut fes = 0;
        let mut population = Vec::with_capacity(n);
        for (j, mut x) in positions.into_iter().enumerate() {
            let budget = fes_max - fes - (n - j - 1);
            let ev = objective.evaluate(&mut x, &mut rng, budget);
            fes += ev.evaluations.clamp(1, budget);
            population.push(Agent {
                position: x,
                fitness: ev.fitness,
                feasible: ev.feasible,
            });
        }
        sort_agents(&mut population);
        let best = population[0].clone();
        let mut opt = Self {
            objective,
            levy_sigma: levy_sigma(params.levy_beta)?,
            archive: EliteArchive::new(params.archive_capacity),
            params,
            population,
            rng,
            fes,
            fes_max,
            iteration: 0,
            best,
        };
        if opt.params.variant.uses_covariance() {
            let k = school_count(opt.params.g1, n);
            opt.push_elites(k)?;
        }
        Ok(opt)
    }

    pub fn fes(&self) -> usize {
        self.fes
    }

    pub fn fes_max(&self) -> usize {
        self.fes_max
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Agents sorted ascending by fitness.
    pub fn population(&self) -> &[Agent] {
        &self.population
    }

    pub fn archive(&self) -> &EliteArchive {
        &self.archive
    }

    pub fn params(&self) -> &AlgorithmParams {
        &self.params
    }

    /// Best agent seen so far.
    pub fn best(&self) -> &Agent {
        &self.best
    }

    /// Whether another full iteration fits in the budget.
    pub fn can_step(&self) -> bool {
        self.fes + self.population.len() <= self.fes_max
    }

    /// Runs one full iteration of the current stage.
    pub fn step(&mut self) -> Result<Stage> {
        let n = self.population.len();
        if !self.can_step() {
            return Err(Error::BudgetExceeded {
                fes: self.fes + n,
                fes_max: self.fes_max,
            });
        }
        let stage = stage_of(self.iteration + 1);
        let ctx = StageContext::new(self.fes, self.fes_max, self.params.h)?;
        let k = school_count(self.params.school_fraction(stage), n);
        let stats = PopulationStats::of(&self.population);
        let dim = self.objective.bounds().dim();

        let rule = self.params.variant.school_rule(stage);
        let model = if rule != SchoolRule::Eco && self.archive.len() >= archive_threshold(dim) {
            Some(estimate(&self.archive)?)
        } else {
            None
        };

        let mut candidates = Vec::with_capacity(n);
        let school_means = if stage == Stage::Primary && model.is_none() {
            self.school_means(k, &stats.mean)
        } else {
            Vec::new()
        };
        for i in 0..k {
            let x = self.population[i].position.clone();
            let new = match &model {
                Some(m) => self.covariance_school(rule, i, &x, m, &stats)?,
                None => self.eco_school(stage, &x, &ctx, &stats, school_means.get(i)),
            };
            candidates.push(new);
        }
        for i in k..n {
            let x = &self.population[i].position;
            let close = {
                let schools: Vec<&[f64]> =
                    self.population[..k].iter().map(|a| a.position.as_slice()).collect();
                schools[closest(x, &schools)].to_vec()
            };
            let new = match stage {
                Stage::Primary => {
                    let randn = self.rng.normal();
                    primary_student_move(x, &close, ctx.omega, randn)
                }
                Stage::Middle => {
                    let (p, e) = ctx.draw_talent(&mut self.rng);
                    middle_student_move(x, &close, ctx.omega, p, e)
                }
                Stage::High => {
                    let (p, e) = ctx.draw_talent(&mut self.rng);
                    high_student_move(x, &stats.best.position, p, e)
                }
            };
            candidates.push(new);
        }

        let bounds = self.objective.bounds();
        for (j, mut x) in candidates.into_iter().enumerate() {
            clamp_in_place(&mut x, bounds);
            let budget = self.fes_max - self.fes - (n - j - 1);
            let ev = self.objective.evaluate(&mut x, &mut self.rng, budget);
            self.fes += ev.evaluations.clamp(1, budget);
            let current = &mut self.population[j];
            if ev.fitness <= current.fitness {
                *current = Agent {
                    position: x,
                    fitness: ev.fitness,
                    feasible: ev.feasible,
                };
            }
        }

        sort_agents(&mut self.population);
        if self.params.variant.uses_covariance() {
            self.push_elites(k)?;
        }
        if self.population[0].fitness < self.best.fitness {
            self.best = self.population[0].clone();
        }
        self.iteration += 1;
        Ok(stage)
    }

    /// Steps until the next iteration would overrun the budget.
    pub fn run(&mut self, mut on_iteration: impl FnMut(&Self)) -> Result<()> {
        while self.can_step() {
            self.step()?;
            on_iteration(self);
        }
        Ok(())
    }

    /// Per-school mean of the students that pick it as their closest school.
    fn school_means(&self, k: usize, fallback: &[f64]) -> Vec<Vec<f64>> {
        let schools: Vec<&[f64]> = self.population[..k].iter().map(|a| a.position.as_slice()).collect();
        let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); k];
        for a in &self.population[k..] {
            members[closest(&a.position, &schools)].push(&a.position);
        }
        members
            .into_iter()
            .map(|m| if m.is_empty() { fallback.to_vec() } else { mean_of(m) })
            .collect()
    }

    fn eco_school(
        &mut self,
        stage: Stage,
        x: &[f64],
        ctx: &StageContext,
        stats: &PopulationStats,
        school_mean: Option<&Vec<f64>>,
    ) -> Vec<f64> {
        let dim = x.len();
        match stage {
            Stage::Primary => {
                let levy = levy_with_sigma(dim, self.params.levy_beta, self.levy_sigma, &mut self.rng);
                let mean = school_mean.map(Vec::as_slice).unwrap_or(&stats.mean);
                primary_school_move(x, mean, ctx.omega, &levy)
            }
            Stage::Middle => {
                let levy = levy_with_sigma(dim, self.params.levy_beta, self.levy_sigma, &mut self.rng);
                middle_school_move(x, &stats.best.position, &stats.mean, ctx.progress, &levy)
            }
            Stage::High => {
                let n1 = self.rng.normal();
                let n2 = self.rng.normal();
                high_school_move(x, &stats.best.position, &stats.mean, &stats.worst.position, n1, n2)
            }
        }
    }

    fn covariance_school(
        &mut self,
        rule: SchoolRule,
        own: usize,
        x: &[f64],
        model: &CovModel,
        stats: &PopulationStats,
    ) -> Result<Vec<f64>> {
        match rule {
            SchoolRule::Gaussian => gaussian_operator(x, model, &mut self.rng),
            SchoolRule::Shift => shift_operator(x, model, &stats.best.position, &mut self.rng),
            SchoolRule::Differential => differential_operator(
                own,
                model,
                &self.population,
                &stats.best.position,
                &stats.worst.position,
                &mut self.rng,
            ),
            SchoolRule::Eco => unreachable!("ECO schools never sample the model"),
        }
    }

    fn push_elites(&mut self, k: usize) -> Result<()> {
        let best = self.population[0].position.clone();
        let picked = elite_select(&self.population, &best, k, self.params.elite_weight)?;
        let entries: Vec<ArchiveEntry> = picked
            .into_iter()
            .map(|i| ArchiveEntry {
                position: self.population[i].position.clone(),
                fitness: self.population[i].fitness,
            })
            .collect();
        self.archive.push(entries)
    }
}

/// Stable ascending sort by fitness.
pub fn sort_agents(agents: &mut [Agent]) {
    agents.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
}
