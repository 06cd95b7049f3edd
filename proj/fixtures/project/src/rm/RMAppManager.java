package org.apache.hadoop.yarn.server.resourcemanager;

public class RMAppManager implements AppManager {
    /**
     * Accepts a client submission and stores the application state.
     */
    public String submitApplication(String jobId) {
        LOG.info("Storing application with id " + jobId);
        return jobId;
    }

    /**
     * Returns the current report of a running application.
     */
    public String getAppReport(String jobId) {
        LOG.debug("Reading report for application " + jobId);
        return jobId;
    }
}
