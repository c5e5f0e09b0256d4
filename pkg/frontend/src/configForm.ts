// Study configuration form: client-side validation, demographic fields with
// weights, survey composition with one-click import of the standard ten-item
// usability instrument, and submission to the study-creation endpoint.

import { ApiClient, ApiError } from "./api.js";

export interface WeightedValue {
  label: string;
  weight: number;
}

export interface DemographicFieldDraft {
  name: string;
  values: WeightedValue[];
}

export interface SurveyItemDraft {
  id: string;
  kind: "likert" | "open";
  text: string;
  scale: [number, number] | null;
  instrument_tag: string | null;
}

export const SUS_ITEMS: readonly string[] = [
  "I think that I would like to use this system frequently.",
  "I found the system unnecessarily complex.",
  "I thought the system was easy to use.",
  "I think that I would need the support of a technical person to be able to use this system.",
  "I found the various functions in this system were well integrated.",
  "I thought there was too much inconsistency in this system.",
  "I would imagine that most people would learn to use this system very quickly.",
  "I found the system very cumbersome to use.",
  "I felt very confident using the system.",
  "I needed to learn a lot of things before I could get going with this system.",
];

export class StudyConfigForm {
  url = "";
  task = "";
  nParticipants = 1;
  examplePersona = "";
  demographicFields: DemographicFieldDraft[] = [];
  survey: SurveyItemDraft[] = [];
  stepBudget = 50;
  errors: Record<string, string> = {};

  addDemographicField(name: string): DemographicFieldDraft {
    const field = { name, values: [] as WeightedValue[] };
    this.demographicFields.push(field);
    return field;
  }

  addValue(field: DemographicFieldDraft, label: string, weight: number): void {
    field.values.push({ label, weight });
  }

  addSurveyItem(item: SurveyItemDraft): void {
    this.survey.push(item);
  }

  /** One-click import of the ten-item usability scale, tagged sus:1..sus:10. */
  importSus(): void {
    SUS_ITEMS.forEach((text, i) => {
      this.survey.push({
        id: `sus${i + 1}`,
        kind: "likert",
        text,
        scale: [1, 5],
        instrument_tag: `sus:${i + 1}`,
      });
    });
  }

  validate(): boolean {
    this.errors = {};
    if (!this.url.trim()) this.errors.url = "website URL is required";
    if (!this.task.trim()) this.errors.task = "participant task is required";
    if (!Number.isInteger(this.nParticipants) || this.nParticipants < 1) {
      this.errors.nParticipants = "participant count must be at least 1";
    }
    for (const field of this.demographicFields) {
      if (!field.name.trim()) {
        this.errors.demographics = "demographic fields need names";
      }
      if (field.values.length === 0) {
        this.errors.demographics = `field "${field.name}" needs at least one value`;
      }
      for (const value of field.values) {
        if (value.weight < 0) {
          this.errors.demographics = `negative weight on "${field.name}: ${value.label}"`;
        }
      }
    }
    for (const item of this.survey) {
      if (item.kind === "likert") {
        if (!item.scale || item.scale[0] >= item.scale[1]) {
          this.errors.survey = `likert item "${item.id}" needs a valid (min, max) scale`;
        }
      }
    }
    return Object.keys(this.errors).length === 0;
  }

  toConfig(): Record<string, unknown> {
    return {
      url: this.url,
      task: this.task,
      n_participants: this.nParticipants,
      example_persona: this.examplePersona || undefined,
      demographic_spec: {
        sampling_mode: "weighted-random",
        fields: this.demographicFields.map((f) => ({
          name: f.name,
          values: f.values.map((v) => ({ label: v.label, weight: v.weight })),
        })),
      },
      survey: this.survey.map((item) => ({
        id: item.id,
        kind: item.kind,
        text: item.text,
        scale: item.scale,
        instrument_tag: item.instrument_tag,
      })),
      step_budget: this.stepBudget,
    };
  }

  /** Validate then create the study; resolves to the new run id. */
  async submit(api: ApiClient): Promise<string | null> {
    if (!this.validate()) return null;
    try {
      const response = await api.createStudy(this.toConfig());
      return response.run_id;
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.errors.server = error.detail;
        return null;
      }
      throw error;
    }
  }
}
