import { ApiClient } from "./api.js";
import { DashboardController } from "./controller.js";
import { DomView } from "./view.js";

const view = new DomView(document);
const controller = new DashboardController(new ApiClient(), view);

view.bind({
  onToggle: (classId, state) => void controller.toggleClass(classId, state),
  onWhatIf: (overlay) => void controller.runWhatIf(overlay),
  onCloseWhatIf: () => controller.closeWhatIf(),
  onEvent: (kind, requirementId) => void controller.recordEvent(kind, requirementId),
  onRefresh: () => void controller.refresh(),
});

void controller.init();
